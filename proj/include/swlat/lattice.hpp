#pragma once

// Periodic hypercubic lattice, site fields and the covariant difference
// operators of a U(1) connection acting on complex 1-forms.
//
// Conventions:
//   sites are row-major (axis 0 slowest), components are minor;
//   a connection is stored as its real coefficient a, A = A_ref + i a;
//   the link transporter is U_mu(x) = exp(i h a_mu(x));
//   d is the forward difference, d* its exact adjoint with respect to the
//   h^n-weighted real inner product.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "swlat/error.hpp"

namespace swlat {

using cplx = std::complex<double>;

class Grid {
 public:
  Grid(std::vector<int> extents, double spacing);

  int dim() const noexcept { return static_cast<int>(extents_.size()); }
  const std::vector<int>& extents() const noexcept { return extents_; }
  int extent(int mu) const { return extents_[static_cast<std::size_t>(mu)]; }
  double spacing() const noexcept { return h_; }
  /// h^n, the weight of one site in every lattice sum.
  double cell_volume() const noexcept { return cell_volume_; }
  std::size_t sites() const noexcept { return sites_; }
  /// Number of ordered pairs mu < nu.
  int pairs() const noexcept { return dim() * (dim() - 1) / 2; }
  /// Lexicographic index of the pair (mu, nu), mu < nu.
  int pair_index(int mu, int nu) const;
  std::pair<int, int> pair_at(int p) const { return pair_list_[static_cast<std::size_t>(p)]; }

  std::size_t forward(std::size_t x, int mu) const { return fwd_[x * nd() + static_cast<std::size_t>(mu)]; }
  std::size_t backward(std::size_t x, int mu) const { return bwd_[x * nd() + static_cast<std::size_t>(mu)]; }
  int coord(std::size_t x, int mu) const { return coords_[x * nd() + static_cast<std::size_t>(mu)]; }
  std::size_t index(std::span<const int> coords) const;

  /// Physical length of axis mu, N_mu h.
  double length(int mu) const { return extent(mu) * h_; }

  bool operator==(const Grid& other) const {
    return extents_ == other.extents_ && h_ == other.h_;
  }

 private:
  std::size_t nd() const noexcept { return extents_.size(); }

  std::vector<int> extents_;
  double h_;
  double cell_volume_;
  std::size_t sites_;
  std::vector<std::size_t> fwd_;
  std::vector<std::size_t> bwd_;
  std::vector<int> coords_;
  std::vector<std::pair<int, int>> pair_list_;
};

// Field kinds. The tag fixes the per-site component count.
struct ScalarKind { static int components(const Grid&) { return 1; } };
struct GaugeKind { static int components(const Grid& g) { return g.dim(); } };
struct SectionKind { static int components(const Grid& g) { return g.dim(); } };
struct TwoFormKind { static int components(const Grid& g) { return g.pairs(); } };
// n x n array (nabla_mu sigma)_nu stored at component mu * n + nu.
struct CovGradKind { static int components(const Grid& g) { return g.dim() * g.dim(); } };

template <class T, class Kind>
class Field {
 public:
  using value_type = T;

  Field() = default;
  explicit Field(const Grid& g, T init = T{})
      : comps_(Kind::components(g)),
        sites_(g.sites()),
        data_(g.sites() * static_cast<std::size_t>(comps_), init) {}

  T& operator()(std::size_t x, int c) { return data_[x * static_cast<std::size_t>(comps_) + static_cast<std::size_t>(c)]; }
  const T& operator()(std::size_t x, int c) const { return data_[x * static_cast<std::size_t>(comps_) + static_cast<std::size_t>(c)]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t sites() const noexcept { return sites_; }
  int components() const noexcept { return comps_; }

  bool matches(const Grid& g) const {
    return sites_ == g.sites() && comps_ == Kind::components(g);
  }

  bool operator==(const Field&) const = default;

 private:
  int comps_ = 0;
  std::size_t sites_ = 0;
  std::vector<T> data_;
};

using ScalarField = Field<double, ScalarKind>;
using ComplexScalarField = Field<cplx, ScalarKind>;
using GaugeField = Field<double, GaugeKind>;
using SectionField = Field<cplx, SectionKind>;
using TwoFormField = Field<double, TwoFormKind>;
using ComplexTwoFormField = Field<cplx, TwoFormKind>;
using CovGradField = Field<cplx, CovGradKind>;

template <class T, class Kind>
void require_shape(const Grid& g, const Field<T, Kind>& f, const char* what) {
  if (!f.matches(g)) {
    fail(ErrorCode::kShapeMismatch,
         std::string(what) + ": field shape does not match grid (" +
             std::to_string(f.size()) + " values, expected " +
             std::to_string(g.sites() * static_cast<std::size_t>(Kind::components(g))) + ")");
  }
}

// ---- threading ------------------------------------------------------------

/// Worker count used by site loops. Results never depend on it.
void set_thread_count(int threads);
int thread_count();
/// Runs body(begin, end) over disjoint chunks of [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

// ---- reductions -------------------------------------------------------------

/// Fixed-shape pairwise summation; bit-identical for identical input.
double pairwise_sum(std::span<const double> values);

// ---- operators --------------------------------------------------------------

/// Forward-difference gradient of a scalar, (d zeta)_mu(x) = (zeta(x+mu) - zeta(x))/h.
GaugeField grad_scalar(const Grid& g, const ScalarField& zeta);
/// Adjoint of grad_scalar: (d* a)(x) = -sum_mu (a_mu(x) - a_mu(x-mu))/h.
ScalarField div_oneform(const Grid& g, const GaugeField& a);
/// F = da with forward differences.
TwoFormField curvature(const Grid& g, const GaugeField& a);
/// Adjoint of curvature: d* on 2-forms.
GaugeField curvature_adjoint(const Grid& g, const TwoFormField& f);
/// d* d on scalars, the periodic 2n+1 point stencil.
ScalarField laplacian_scalar(const Grid& g, const ScalarField& zeta);
/// (d* d + d d*) on real 1-forms, acting componentwise as laplacian_scalar.
GaugeField laplacian_oneform(const Grid& g, const GaugeField& a);

/// Link transporters U_mu(x) = exp(i h a_mu(x)).
Field<cplx, GaugeKind> transporters(const Grid& g, const GaugeField& a);

/// (nabla_mu sigma)_nu(x) = (U_mu(x) sigma_nu(x+mu) - sigma_nu(x))/h.
CovGradField cov_grad(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// Exact adjoint of cov_grad (componentwise covariant backward difference).
SectionField cov_grad_adjoint(const Grid& g, const GaugeField& a, const CovGradField& t);
/// Covariant derivative of a complex scalar, (d_A phi)_mu = (U_mu(x) phi(x+mu) - phi(x))/h.
SectionField cov_grad_scalar(const Grid& g, const GaugeField& a, const ComplexScalarField& phi);
/// d_A* on complex 1-forms, exact adjoint of cov_grad_scalar.
ComplexScalarField cov_div(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// (d_A sigma)_{mu nu} = (nabla_mu sigma)_nu - (nabla_nu sigma)_mu.
ComplexTwoFormField d_A_oneform(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// Exact adjoint of d_A_oneform.
SectionField d_A_oneform_adjoint(const Grid& g, const GaugeField& a, const ComplexTwoFormField& w);

// ---- norms ------------------------------------------------------------------

struct Norms {
  double l2 = 0.0;
  double l4 = 0.0;
  double w12 = 0.0;
};

/// Real part of the h^n-weighted sum of conj(f1) f2.
template <class T, class Kind>
double inner(const Grid& g, const Field<T, Kind>& f1, const Field<T, Kind>& f2);

/// Discrete L2, L4 and W^{1,2} norms; the gradient is the plain forward difference
/// of every component.
template <class T, class Kind>
Norms norms(const Grid& g, const Field<T, Kind>& f);

template <class T, class Kind>
double l2_norm(const Grid& g, const Field<T, Kind>& f) {
  return std::sqrt(inner(g, f, f));
}

extern template double inner(const Grid&, const ScalarField&, const ScalarField&);
extern template double inner(const Grid&, const ComplexScalarField&, const ComplexScalarField&);
extern template double inner(const Grid&, const GaugeField&, const GaugeField&);
extern template double inner(const Grid&, const SectionField&, const SectionField&);
extern template double inner(const Grid&, const TwoFormField&, const TwoFormField&);
extern template double inner(const Grid&, const ComplexTwoFormField&, const ComplexTwoFormField&);
extern template double inner(const Grid&, const CovGradField&, const CovGradField&);
extern template Norms norms(const Grid&, const ScalarField&);
extern template Norms norms(const Grid&, const GaugeField&);
extern template Norms norms(const Grid&, const SectionField&);

/// Rejects NaN or Inf anywhere in the field.
template <class T, class Kind>
bool all_finite(const Field<T, Kind>& f) {
  for (const auto& v : f.values()) {
    if constexpr (std::is_same_v<T, cplx>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace swlat
