#pragma once

// Point-level algebra: quaternions, su(2) matrices, the iR + C model of su(2)
// and the three quadratic maps tau (quaternionic 3d Seiberg-Witten,
// Kapustin-Witten [s,s] and the hermitian s^h ^ s).

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "swlat/error.hpp"

namespace swlat {

using cplx = std::complex<double>;

/// s1 + s2 i + s3 j + s4 k.
struct Quaternion {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  Quaternion conj() const { return {s1, -s2, -s3, -s4}; }
  double norm2() const { return s1 * s1 + s2 * s2 + s3 * s3 + s4 * s4; }
  double real() const { return s1; }

  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.s1 * q.s1 - p.s2 * q.s2 - p.s3 * q.s3 - p.s4 * q.s4,
            p.s1 * q.s2 + p.s2 * q.s1 + p.s3 * q.s4 - p.s4 * q.s3,
            p.s1 * q.s3 - p.s2 * q.s4 + p.s3 * q.s1 + p.s4 * q.s2,
            p.s1 * q.s4 + p.s2 * q.s3 - p.s3 * q.s2 + p.s4 * q.s1};
  }
  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p.s1 + q.s1, p.s2 + q.s2, p.s3 + q.s3, p.s4 + q.s4};
  }
  friend Quaternion operator*(double c, const Quaternion& q) {
    return {c * q.s1, c * q.s2, c * q.s3, c * q.s4};
  }
  bool operator==(const Quaternion&) const = default;
};

/// 2x2 complex matrix, row-major. Not constrained to su(2).
struct Mat2 {
  std::array<cplx, 4> m{};

  cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  const cplx& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
  cplx trace() const { return m[0] + m[3]; }
  Mat2 adjoint() const;

  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(double c, const Mat2& a);
  bool operator==(const Mat2&) const = default;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Mat2& a, const Mat2& b);

/// Trace-free anti-hermitian 2x2 matrix.
class Su2Element {
 public:
  static constexpr double kTolerance = 1e-12;

  Su2Element() = default;
  /// Validates trace and anti-hermiticity to kTolerance.
  explicit Su2Element(const Mat2& m);

  const Mat2& matrix() const& noexcept { return m_; }
  Mat2 matrix() && noexcept { return m_; }

  static Su2Element e1();
  static Su2Element e2();
  static Su2Element e3();

  friend Su2Element operator+(const Su2Element& a, const Su2Element& b);
  friend Su2Element operator*(double c, const Su2Element& a);
  friend Su2Element commutator(const Su2Element& a, const Su2Element& b);

 private:
  struct Unchecked {};
  Su2Element(const Mat2& m, Unchecked) : m_(m) {}

  Mat2 m_{};
};

/// Matrix commutator ab - ba; closes on su(2).
Su2Element commutator(const Su2Element& a, const Su2Element& b);
/// -1/2 Tr(ab).
double su2_inner(const Su2Element& a, const Su2Element& b);

/// (a i, z) in iR + C.
struct IrcElement {
  double a = 0.0;
  cplx z{};

  friend IrcElement operator+(const IrcElement& u, const IrcElement& v) { return {u.a + v.a, u.z + v.z}; }
  friend IrcElement operator-(const IrcElement& u, const IrcElement& v) { return {u.a - v.a, u.z - v.z}; }
  friend IrcElement operator*(double c, const IrcElement& u) { return {c * u.a, c * u.z}; }
  bool operator==(const IrcElement&) const = default;
};

/// (a i, b + i c) -> a e3 + b e2 + c e1.
Su2Element irc_to_su2(const IrcElement& u);
IrcElement su2_to_irc(const Su2Element& s);
/// [(a i, alpha), (b i, beta)] = (-Im(conj(alpha) beta) i, a i beta - b i alpha).
/// Under irc_to_su2 the C part is one half of the matrix commutator and the iR
/// part is minus one half of it.
IrcElement irc_bracket(const IrcElement& u, const IrcElement& v);
/// ab + Re(conj(alpha) beta); equals su2_inner of the images.
double irc_inner(const IrcElement& u, const IrcElement& v);

/// Coefficients of a 2-form on the blades e^mu ^ e^nu, mu < nu, in
/// lexicographic order.
template <class T>
class TwoFormCoeffs {
 public:
  explicit TwoFormCoeffs(int n) : n_(n), c_(static_cast<std::size_t>(n * (n - 1) / 2)) {}

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return c_.size(); }
  static int index(int n, int mu, int nu) { return mu * n - mu * (mu + 1) / 2 + (nu - mu - 1); }
  T& at(int mu, int nu) { return c_[static_cast<std::size_t>(index(n_, mu, nu))]; }
  const T& at(int mu, int nu) const { return c_[static_cast<std::size_t>(index(n_, mu, nu))]; }
  std::span<const T> values() const noexcept { return c_; }
  std::span<T> values() noexcept { return c_; }

 private:
  int n_;
  std::vector<T> c_;
};

/// Quaternionic tau of the 3d Seiberg-Witten functional, i-coefficients:
/// tau_12 = s1 s3 - s2 s4, tau_13 = s1 s4 + s2 s3, tau_23 = (-s1^2 - s2^2 + s3^2 + s4^2)/2.
TwoFormCoeffs<double> tau_sw(const Quaternion& s);

/// [s, s]: coefficient (mu, nu) is 2 [s_mu, s_nu].
TwoFormCoeffs<Su2Element> tau_kw(std::span<const Su2Element> s);
/// Same, validating each raw matrix as an su(2) element first.
TwoFormCoeffs<Su2Element> tau_kw(std::span<const Mat2> s);

/// s^h ^ s: coefficient (mu, nu) is 2 Im(conj(s_mu) s_nu).
TwoFormCoeffs<double> tau_h(std::span<const cplx> s);

/// Sum of squared coefficients.
double norm2(const TwoFormCoeffs<double>& t);

}  // namespace swlat
