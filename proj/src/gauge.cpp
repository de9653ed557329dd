#include "swlat/gauge.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace swlat {

GaugeTransform GaugeTransform::identity(const Grid& g) {
  return {ScalarField(g), std::vector<int>(static_cast<std::size_t>(g.dim()), 0)};
}

namespace {

void require_transform(const Grid& g, const GaugeTransform& t) {
  require_shape(g, t.zeta, "apply_gauge");
  if (t.winding.size() != static_cast<std::size_t>(g.dim())) {
    fail(ErrorCode::kShapeMismatch, "apply_gauge: winding vector must have one entry per axis");
  }
}

double winding_shift(const Grid& g, const GaugeTransform& t, int mu) {
  return 2.0 * std::numbers::pi * t.winding[static_cast<std::size_t>(mu)] / g.length(mu);
}

}  // namespace

GaugeField apply_gauge(const Grid& g, const GaugeTransform& t, const GaugeField& a) {
  require_shape(g, a, "apply_gauge");
  require_transform(g, t);
  GaugeField out = a;
  const double inv_h = 1.0 / g.spacing();
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) {
      out(x, mu) += (t.zeta(g.forward(x, mu), 0) - t.zeta(x, 0)) * inv_h + winding_shift(g, t, mu);
    }
  }
  return out;
}

GaugedFields apply_gauge(const Grid& g, const GaugeTransform& t, const GaugeField& a,
                         const SectionField& sigma) {
  require_shape(g, sigma, "apply_gauge");
  GaugedFields out{apply_gauge(g, t, a), sigma};
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double phase = t.zeta(x, 0);
    for (int mu = 0; mu < g.dim(); ++mu) {
      phase += 2.0 * std::numbers::pi * t.winding[static_cast<std::size_t>(mu)] * g.coord(x, mu) / g.extent(mu);
    }
    const cplx rot = std::polar(1.0, -phase);
    for (int mu = 0; mu < g.dim(); ++mu) out.sigma(x, mu) *= rot;
  }
  return out;
}

// ---- Poisson ----------------------------------------------------------------

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double mean(std::span<const double> v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

void remove_mean(ScalarField& f) {
  const double m = mean(f.values());
  for (auto& v : f.values()) v -= m;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!ptr) fail(ErrorCode::kInternal, "fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

Plan make_plan(const Grid& g, fftw_complex* buf, int sign) {
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  const std::vector<int>& dims = g.extents();
  // FFTW_ESTIMATE builds the same plan every time, so results are reproducible.
  return Plan(fftw_plan_dft(g.dim(), dims.data(), buf, buf, sign, FFTW_ESTIMATE));
}

ScalarField solve_fft(const Grid& g, const ScalarField& rhs) {
  const std::size_t v = g.sites();
  FftwBuffer buf(v);
  Plan fwd = make_plan(g, buf.ptr, FFTW_FORWARD);
  Plan bwd = make_plan(g, buf.ptr, FFTW_BACKWARD);
  for (std::size_t x = 0; x < v; ++x) {
    buf.ptr[x][0] = rhs(x, 0);
    buf.ptr[x][1] = 0.0;
  }
  fftw_execute(fwd.get());

  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  for (std::size_t x = 0; x < v; ++x) {
    double lambda = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) {
      const double k = 2.0 * std::numbers::pi * g.coord(x, mu) / g.extent(mu);
      lambda += (2.0 - 2.0 * std::cos(k)) * inv_h2;
    }
    const double scale = (x == 0) ? 0.0 : 1.0 / (lambda * static_cast<double>(v));
    buf.ptr[x][0] *= scale;
    buf.ptr[x][1] *= scale;
  }
  fftw_execute(bwd.get());

  ScalarField out(g);
  for (std::size_t x = 0; x < v; ++x) out(x, 0) = buf.ptr[x][0];
  remove_mean(out);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * b[i];
  return pairwise_sum(t);
}

ScalarField solve_cg(const Grid& g, const ScalarField& rhs, PoissonStats& stats) {
  constexpr double kTol = 1e-12;
  // The stencil diagonal is constant, so Jacobi preconditioning is a scaling.
  const double inv_diag = g.spacing() * g.spacing() / (2.0 * g.dim());
  ScalarField b = rhs;
  remove_mean(b);
  ScalarField x(g);
  ScalarField r = b;
  const double bnorm = std::sqrt(dot(b.values(), b.values()));
  if (bnorm == 0.0) {
    stats.iterations = 0;
    stats.relative_residual = 0.0;
    return x;
  }
  ScalarField z = r;
  for (auto& v : z.values()) v *= inv_diag;
  ScalarField p = z;
  double rz = dot(r.values(), z.values());
  const int max_iter = static_cast<int>(std::min<std::size_t>(20 * g.sites() + 100, 1000000));
  int it = 0;
  double rel = 1.0;
  for (; it < max_iter; ++it) {
    const ScalarField ap = laplacian_scalar(g, p);
    const double alpha = rz / dot(p.values(), ap.values());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x.values()[i] += alpha * p.values()[i];
      r.values()[i] -= alpha * ap.values()[i];
    }
    rel = std::sqrt(dot(r.values(), r.values())) / bnorm;
    if (rel <= kTol) {
      ++it;
      break;
    }
    for (std::size_t i = 0; i < z.size(); ++i) z.values()[i] = r.values()[i] * inv_diag;
    const double rz_next = dot(r.values(), z.values());
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < p.size(); ++i) p.values()[i] = z.values()[i] + beta * p.values()[i];
  }
  stats.iterations = it;
  stats.relative_residual = rel;
  if (rel > kTol) {
    fail(ErrorCode::kSolver, "conjugate gradient Poisson solve did not reach relative residual 1e-12 (" +
                                 std::to_string(rel) + " after " + std::to_string(it) + " iterations)");
  }
  remove_mean(x);
  return x;
}

}  // namespace

ScalarField poisson_solve(const Grid& g, const ScalarField& rhs, PoissonMethod method, PoissonStats* stats) {
  require_shape(g, rhs, "poisson_solve");
  PoissonStats local;
  PoissonStats& st = stats ? *stats : local;
  if (method == PoissonMethod::kAuto) {
    bool pow2 = true;
    for (int e : g.extents()) pow2 = pow2 && power_of_two(e);
    method = pow2 ? PoissonMethod::kFft : PoissonMethod::kConjugateGradient;
  }
  st.method = method;
  if (method == PoissonMethod::kFft) {
    ScalarField b = rhs;
    remove_mean(b);
    auto out = solve_fft(g, b);
    st.iterations = 0;
    const auto res = laplacian_scalar(g, out);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      num += std::pow(res.values()[i] - b.values()[i], 2);
      den += b.values()[i] * b.values()[i];
    }
    st.relative_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return out;
  }
  return solve_cg(g, rhs, st);
}

CoulombResult coulomb_fix(const Grid& g, const GaugeField& a, PoissonMethod method) {
  require_shape(g, a, "coulomb_fix");
  ScalarField rhs = div_oneform(g, a);
  for (auto& v : rhs.values()) v = -v;
  CoulombResult out{GaugeTransform::identity(g), GaugeField(), PoissonStats{}};
  out.transform.zeta = poisson_solve(g, rhs, method, &out.stats);
  out.a = apply_gauge(g, out.transform, a);
  return out;
}

std::vector<double> holonomy_means(const Grid& g, const GaugeField& a) {
  require_shape(g, a, "holonomy_means");
  std::vector<double> means(static_cast<std::size_t>(g.dim()));
  std::vector<double> comp(g.sites());
  for (int mu = 0; mu < g.dim(); ++mu) {
    for (std::size_t x = 0; x < g.sites(); ++x) comp[x] = a(x, mu);
    means[static_cast<std::size_t>(mu)] = mean(comp);
  }
  return means;
}

HodgeParts hodge_split(const Grid& g, const GaugeField& a, PoissonMethod method) {
  const auto fixed = coulomb_fix(g, a, method);
  HodgeParts parts{fixed.transform.zeta, holonomy_means(g, fixed.a), fixed.a};
  for (auto& v : parts.exact_potential.values()) v = -v;
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) parts.coexact_remainder(x, mu) -= parts.harmonic[static_cast<std::size_t>(mu)];
  }
  return parts;
}

namespace {

std::vector<int> reducing_winding(const Grid& g, const std::vector<double>& means) {
  std::vector<int> w(means.size());
  for (int mu = 0; mu < g.dim(); ++mu) {
    const double period = 2.0 * std::numbers::pi / g.length(mu);
    const double m = means[static_cast<std::size_t>(mu)];
    w[static_cast<std::size_t>(mu)] = -static_cast<int>(std::floor((m + 0.5 * period) / period));
  }
  return w;
}

}  // namespace

HolonomyResult reduce_holonomy(const Grid& g, const GaugeField& a) {
  HolonomyResult out{GaugeTransform::identity(g), a};
  out.transform.winding = reducing_winding(g, holonomy_means(g, a));
  bool nontrivial = false;
  for (int w : out.transform.winding) nontrivial = nontrivial || w != 0;
  if (nontrivial) out.a = apply_gauge(g, out.transform, a);
  return out;
}

RegaugeResult regauge(const Grid& g, const GaugeField& a, const SectionField& sigma, PoissonMethod method) {
  const auto fixed = coulomb_fix(g, a, method);
  GaugeTransform t = fixed.transform;
  t.winding = reducing_winding(g, holonomy_means(g, fixed.a));
  return {t, apply_gauge(g, t, a, sigma)};
}

double smallest_nonzero_laplacian_eigenvalue(const Grid& g) {
  double lambda = std::numeric_limits<double>::infinity();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  for (int mu = 0; mu < g.dim(); ++mu) {
    const double k = 2.0 * std::numbers::pi / g.extent(mu);
    lambda = std::min(lambda, (2.0 - 2.0 * std::cos(k)) * inv_h2);
  }
  return lambda;
}

CoercivityReport coercivity_check(const Grid& g, const GaugeField& a, PoissonMethod method) {
  const auto fixed = coulomb_fix(g, a, method);
  const auto reduced = reduce_holonomy(g, fixed.a);

  CoercivityReport rep;
  rep.lhs = norms(g, reduced.a).w12;
  rep.curvature_l2 = l2_norm(g, curvature(g, a));

  double volume = 1.0;
  for (int mu = 0; mu < g.dim(); ++mu) volume *= g.length(mu);
  double harmonic_sq = 0.0;
  for (int mu = 0; mu < g.dim(); ++mu) harmonic_sq += std::pow(std::numbers::pi / g.length(mu), 2);
  const double harmonic_radius = std::sqrt(volume * harmonic_sq);
  const double lambda1 = smallest_nonzero_laplacian_eigenvalue(g);
  rep.constant_estimate = std::max(harmonic_radius, std::sqrt(1.0 + 1.0 / lambda1));
  rep.rhs_bound = rep.constant_estimate * (rep.curvature_l2 + 1.0);
  return rep;
}

}  // namespace swlat
