#include "swlat/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace swlat {

Mat2 Mat2::adjoint() const {
  Mat2 r;
  r(0, 0) = std::conj((*this)(0, 0));
  r(0, 1) = std::conj((*this)(1, 0));
  r(1, 0) = std::conj((*this)(0, 1));
  r(1, 1) = std::conj((*this)(1, 1));
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  }
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
  return r;
}

Mat2 operator*(double c, const Mat2& a) {
  Mat2 r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = c * a.m[i];
  return r;
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

Su2Element::Su2Element(const Mat2& m) : m_(m) {
  const double tr = std::abs(m.trace());
  const double herm = max_abs_diff(m + m.adjoint(), Mat2{});
  if (tr > kTolerance || herm > kTolerance) {
    fail(ErrorCode::kInvalidArgument,
         "matrix is not in su(2): |trace| = " + std::to_string(tr) +
             ", |M + M^*| = " + std::to_string(herm));
  }
}

Su2Element Su2Element::e1() {
  Mat2 m;
  m(0, 1) = cplx(0.0, 1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return {m, Unchecked{}};
}

Su2Element Su2Element::e2() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = -1.0;
  return {m, Unchecked{}};
}

Su2Element Su2Element::e3() {
  Mat2 m;
  m(0, 0) = cplx(0.0, 1.0);
  m(1, 1) = cplx(0.0, -1.0);
  return {m, Unchecked{}};
}

Su2Element operator+(const Su2Element& a, const Su2Element& b) {
  return {a.m_ + b.m_, Su2Element::Unchecked{}};
}

Su2Element operator*(double c, const Su2Element& a) {
  return {c * a.m_, Su2Element::Unchecked{}};
}

Su2Element commutator(const Su2Element& a, const Su2Element& b) {
  const Mat2 c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return {c, Su2Element::Unchecked{}};
}

double su2_inner(const Su2Element& a, const Su2Element& b) {
  return -0.5 * (a.matrix() * b.matrix()).trace().real();
}

Su2Element irc_to_su2(const IrcElement& u) {
  return u.a * Su2Element::e3() + u.z.real() * Su2Element::e2() + u.z.imag() * Su2Element::e1();
}

IrcElement su2_to_irc(const Su2Element& s) {
  // a e3 + b e2 + c e1 = [[a i, b + c i], [-b + c i, -a i]].
  const Mat2& m = s.matrix();
  return {m(0, 0).imag(), m(0, 1)};
}

IrcElement irc_bracket(const IrcElement& u, const IrcElement& v) {
  const cplx i(0.0, 1.0);
  return {-(std::conj(u.z) * v.z).imag(), i * u.a * v.z - i * v.a * u.z};
}

double irc_inner(const IrcElement& u, const IrcElement& v) {
  return u.a * v.a + (std::conj(u.z) * v.z).real();
}

TwoFormCoeffs<double> tau_sw(const Quaternion& s) {
  TwoFormCoeffs<double> t(3);
  t.at(0, 1) = s.s1 * s.s3 - s.s2 * s.s4;
  t.at(0, 2) = s.s1 * s.s4 + s.s2 * s.s3;
  t.at(1, 2) = 0.5 * (-s.s1 * s.s1 - s.s2 * s.s2 + s.s3 * s.s3 + s.s4 * s.s4);
  return t;
}

TwoFormCoeffs<Su2Element> tau_kw(std::span<const Su2Element> s) {
  const int n = static_cast<int>(s.size());
  if (n < 2) fail(ErrorCode::kInvalidArgument, "tau_kw needs at least two components");
  TwoFormCoeffs<Su2Element> t(n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu + 1; nu < n; ++nu) {
      t.at(mu, nu) = 2.0 * commutator(s[static_cast<std::size_t>(mu)], s[static_cast<std::size_t>(nu)]);
    }
  }
  return t;
}

TwoFormCoeffs<Su2Element> tau_kw(std::span<const Mat2> s) {
  std::vector<Su2Element> checked;
  checked.reserve(s.size());
  for (const auto& m : s) checked.emplace_back(m);
  return tau_kw(std::span<const Su2Element>(checked));
}

TwoFormCoeffs<double> tau_h(std::span<const cplx> s) {
  const int n = static_cast<int>(s.size());
  if (n < 2) fail(ErrorCode::kInvalidArgument, "tau_h needs at least two components");
  TwoFormCoeffs<double> t(n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu + 1; nu < n; ++nu) {
      t.at(mu, nu) = 2.0 * (std::conj(s[static_cast<std::size_t>(mu)]) * s[static_cast<std::size_t>(nu)]).imag();
    }
  }
  return t;
}

double norm2(const TwoFormCoeffs<double>& t) {
  double s = 0.0;
  for (double v : t.values()) s += v * v;
  return s;
}

}  // namespace swlat
