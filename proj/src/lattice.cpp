#include "swlat/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace swlat {

Grid::Grid(std::vector<int> extents, double spacing)
    : extents_(std::move(extents)), h_(spacing) {
  if (extents_.size() < 2 || extents_.size() > 4) {
    fail(ErrorCode::kInvalidArgument,
         "grid dimension must be 2, 3 or 4, got " + std::to_string(extents_.size()));
  }
  for (int n : extents_) {
    if (n < 4) {
      fail(ErrorCode::kInvalidArgument,
           "every grid extent must be at least 4, got " + std::to_string(n));
    }
  }
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    fail(ErrorCode::kInvalidArgument, "grid spacing must be positive and finite");
  }

  const std::size_t n = nd();
  cell_volume_ = std::pow(h_, static_cast<double>(n));
  sites_ = 1;
  for (int e : extents_) sites_ *= static_cast<std::size_t>(e);

  std::vector<std::size_t> stride(n, 1);
  for (std::size_t mu = n - 1; mu-- > 0;) {
    stride[mu] = stride[mu + 1] * static_cast<std::size_t>(extents_[mu + 1]);
  }

  fwd_.resize(sites_ * n);
  bwd_.resize(sites_ * n);
  coords_.resize(sites_ * n);
  for (std::size_t x = 0; x < sites_; ++x) {
    std::size_t rem = x;
    for (std::size_t mu = 0; mu < n; ++mu) {
      coords_[x * n + mu] = static_cast<int>(rem / stride[mu]);
      rem %= stride[mu];
    }
    for (std::size_t mu = 0; mu < n; ++mu) {
      const int c = coords_[x * n + mu];
      const int e = extents_[mu];
      const std::size_t base = x - static_cast<std::size_t>(c) * stride[mu];
      fwd_[x * n + mu] = base + static_cast<std::size_t>((c + 1) % e) * stride[mu];
      bwd_[x * n + mu] = base + static_cast<std::size_t>((c + e - 1) % e) * stride[mu];
    }
  }

  for (int mu = 0; mu < dim(); ++mu) {
    for (int nu = mu + 1; nu < dim(); ++nu) pair_list_.emplace_back(mu, nu);
  }
}

int Grid::pair_index(int mu, int nu) const {
  if (!(0 <= mu && mu < nu && nu < dim())) {
    fail(ErrorCode::kInvalidArgument, "pair index requires 0 <= mu < nu < n");
  }
  // Lexicographic: pairs starting at mu' < mu come first.
  const int n = dim();
  return mu * n - mu * (mu + 1) / 2 + (nu - mu - 1);
}

std::size_t Grid::index(std::span<const int> coords) const {
  if (coords.size() != nd()) fail(ErrorCode::kInvalidArgument, "coordinate rank mismatch");
  std::size_t x = 0;
  for (std::size_t mu = 0; mu < nd(); ++mu) {
    const int e = extents_[mu];
    const int c = ((coords[mu] % e) + e) % e;
    x = x * static_cast<std::size_t>(e) + static_cast<std::size_t>(c);
  }
  return x;
}

// ---- threading --------------------------------------------------------------

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }
int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(thread_count());
  if (workers <= 1 || count < 2 * 1024) {
    body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

// ---- reductions -------------------------------------------------------------

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// ---- operators --------------------------------------------------------------

GaugeField grad_scalar(const Grid& g, const ScalarField& zeta) {
  require_shape(g, zeta, "grad_scalar");
  GaugeField out(g);
  const double inv_h = 1.0 / g.spacing();
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      for (int mu = 0; mu < g.dim(); ++mu) {
        out(x, mu) = (zeta(g.forward(x, mu), 0) - zeta(x, 0)) * inv_h;
      }
    }
  });
  return out;
}

ScalarField div_oneform(const Grid& g, const GaugeField& a) {
  require_shape(g, a, "div_oneform");
  ScalarField out(g);
  const double inv_h = 1.0 / g.spacing();
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      double s = 0.0;
      for (int mu = 0; mu < g.dim(); ++mu) s += a(g.backward(x, mu), mu) - a(x, mu);
      out(x, 0) = s * inv_h;
    }
  });
  return out;
}

TwoFormField curvature(const Grid& g, const GaugeField& a) {
  require_shape(g, a, "curvature");
  TwoFormField out(g);
  const double inv_h = 1.0 / g.spacing();
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      for (int p = 0; p < g.pairs(); ++p) {
        const auto [mu, nu] = g.pair_at(p);
        out(x, p) = (a(g.forward(x, mu), nu) - a(x, nu)) * inv_h -
                    (a(g.forward(x, nu), mu) - a(x, mu)) * inv_h;
      }
    }
  });
  return out;
}

GaugeField curvature_adjoint(const Grid& g, const TwoFormField& f) {
  require_shape(g, f, "curvature_adjoint");
  GaugeField out(g);
  const double inv_h = 1.0 / g.spacing();
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t y = b; y < e; ++y) {
      for (int p = 0; p < g.pairs(); ++p) {
        const auto [mu, nu] = g.pair_at(p);
        out(y, nu) += (f(g.backward(y, mu), p) - f(y, p)) * inv_h;
        out(y, mu) -= (f(g.backward(y, nu), p) - f(y, p)) * inv_h;
      }
    }
  });
  return out;
}

ScalarField laplacian_scalar(const Grid& g, const ScalarField& zeta) {
  require_shape(g, zeta, "laplacian_scalar");
  ScalarField out(g);
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      double s = 0.0;
      for (int mu = 0; mu < g.dim(); ++mu) {
        s += 2.0 * zeta(x, 0) - zeta(g.forward(x, mu), 0) - zeta(g.backward(x, mu), 0);
      }
      out(x, 0) = s * inv_h2;
    }
  });
  return out;
}

GaugeField laplacian_oneform(const Grid& g, const GaugeField& a) {
  require_shape(g, a, "laplacian_oneform");
  GaugeField out(g);
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      for (int c = 0; c < g.dim(); ++c) {
        double s = 0.0;
        for (int mu = 0; mu < g.dim(); ++mu) {
          s += 2.0 * a(x, c) - a(g.forward(x, mu), c) - a(g.backward(x, mu), c);
        }
        out(x, c) = s * inv_h2;
      }
    }
  });
  return out;
}

Field<cplx, GaugeKind> transporters(const Grid& g, const GaugeField& a) {
  require_shape(g, a, "transporters");
  Field<cplx, GaugeKind> u(g);
  const double h = g.spacing();
  auto src = a.values();
  auto dst = u.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::polar(1.0, h * src[i]);
  return u;
}

CovGradField cov_grad(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "cov_grad");
  require_shape(g, sigma, "cov_grad");
  const auto u = transporters(g, a);
  const int n = g.dim();
  const double inv_h = 1.0 / g.spacing();
  CovGradField out(g);
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      for (int mu = 0; mu < n; ++mu) {
        const std::size_t xp = g.forward(x, mu);
        const cplx link = u(x, mu);
        for (int nu = 0; nu < n; ++nu) {
          out(x, mu * n + nu) = (link * sigma(xp, nu) - sigma(x, nu)) * inv_h;
        }
      }
    }
  });
  return out;
}

SectionField cov_grad_adjoint(const Grid& g, const GaugeField& a, const CovGradField& t) {
  require_shape(g, a, "cov_grad_adjoint");
  require_shape(g, t, "cov_grad_adjoint");
  const auto u = transporters(g, a);
  const int n = g.dim();
  const double inv_h = 1.0 / g.spacing();
  SectionField out(g);
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t y = b; y < e; ++y) {
      for (int nu = 0; nu < n; ++nu) {
        cplx s = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          const std::size_t ym = g.backward(y, mu);
          s += std::conj(u(ym, mu)) * t(ym, mu * n + nu) - t(y, mu * n + nu);
        }
        out(y, nu) = s * inv_h;
      }
    }
  });
  return out;
}

SectionField cov_grad_scalar(const Grid& g, const GaugeField& a, const ComplexScalarField& phi) {
  require_shape(g, a, "cov_grad_scalar");
  require_shape(g, phi, "cov_grad_scalar");
  const auto u = transporters(g, a);
  const double inv_h = 1.0 / g.spacing();
  SectionField out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) {
      out(x, mu) = (u(x, mu) * phi(g.forward(x, mu), 0) - phi(x, 0)) * inv_h;
    }
  }
  return out;
}

ComplexScalarField cov_div(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "cov_div");
  require_shape(g, sigma, "cov_div");
  const auto u = transporters(g, a);
  const double inv_h = 1.0 / g.spacing();
  ComplexScalarField out(g);
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      cplx s = 0.0;
      for (int mu = 0; mu < g.dim(); ++mu) {
        const std::size_t xm = g.backward(x, mu);
        s += std::conj(u(xm, mu)) * sigma(xm, mu) - sigma(x, mu);
      }
      out(x, 0) = s * inv_h;
    }
  });
  return out;
}

ComplexTwoFormField d_A_oneform(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  const auto grad = cov_grad(g, a, sigma);
  const int n = g.dim();
  ComplexTwoFormField out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int p = 0; p < g.pairs(); ++p) {
      const auto [mu, nu] = g.pair_at(p);
      out(x, p) = grad(x, mu * n + nu) - grad(x, nu * n + mu);
    }
  }
  return out;
}

SectionField d_A_oneform_adjoint(const Grid& g, const GaugeField& a, const ComplexTwoFormField& w) {
  require_shape(g, w, "d_A_oneform_adjoint");
  const int n = g.dim();
  CovGradField t(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int p = 0; p < g.pairs(); ++p) {
      const auto [mu, nu] = g.pair_at(p);
      t(x, mu * n + nu) = w(x, p);
      t(x, nu * n + mu) = -w(x, p);
    }
  }
  return cov_grad_adjoint(g, a, t);
}

// ---- norms ------------------------------------------------------------------

namespace {

inline double real_product(double a, double b) { return a * b; }
inline double real_product(const cplx& a, const cplx& b) {
  return a.real() * b.real() + a.imag() * b.imag();
}
inline double abs2(double a) { return a * a; }
inline double abs2(const cplx& a) { return std::norm(a); }

}  // namespace

template <class T, class Kind>
double inner(const Grid& g, const Field<T, Kind>& f1, const Field<T, Kind>& f2) {
  require_shape(g, f1, "inner");
  require_shape(g, f2, "inner");
  auto v1 = f1.values();
  auto v2 = f2.values();
  std::vector<double> terms(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) terms[i] = real_product(v1[i], v2[i]);
  return g.cell_volume() * pairwise_sum(terms);
}

template <class T, class Kind>
Norms norms(const Grid& g, const Field<T, Kind>& f) {
  require_shape(g, f, "norms");
  const int comps = f.components();
  std::vector<double> sq(f.size());
  std::vector<double> quart(g.sites());
  std::vector<double> diff(f.size() * static_cast<std::size_t>(g.dim()));
  const double inv_h = 1.0 / g.spacing();
  std::size_t k = 0;
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double site = 0.0;
    for (int c = 0; c < comps; ++c) {
      const double m = abs2(f(x, c));
      sq[x * static_cast<std::size_t>(comps) + static_cast<std::size_t>(c)] = m;
      site += m;
      for (int mu = 0; mu < g.dim(); ++mu) {
        diff[k++] = abs2((f(g.forward(x, mu), c) - f(x, c)) * inv_h);
      }
    }
    quart[x] = site * site;
  }
  const double w = g.cell_volume();
  const double l2sq = w * pairwise_sum(sq);
  Norms out;
  out.l2 = std::sqrt(l2sq);
  out.l4 = std::pow(w * pairwise_sum(quart), 0.25);
  out.w12 = std::sqrt(l2sq + w * pairwise_sum(diff));
  return out;
}

template double inner(const Grid&, const ScalarField&, const ScalarField&);
template double inner(const Grid&, const ComplexScalarField&, const ComplexScalarField&);
template double inner(const Grid&, const GaugeField&, const GaugeField&);
template double inner(const Grid&, const SectionField&, const SectionField&);
template double inner(const Grid&, const TwoFormField&, const TwoFormField&);
template double inner(const Grid&, const ComplexTwoFormField&, const ComplexTwoFormField&);
template double inner(const Grid&, const CovGradField&, const CovGradField&);
template Norms norms(const Grid&, const ScalarField&);
template Norms norms(const Grid&, const GaugeField&);
template Norms norms(const Grid&, const SectionField&);

}  // namespace swlat
