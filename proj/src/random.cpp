#include "swlat/random.hpp"

namespace swlat {

GaugeField random_gauge(const Grid& g, Rng& rng, double amplitude) {
  GaugeField a(g);
  for (auto& v : a.values()) v = rng.uniform(-amplitude, amplitude);
  return a;
}

SectionField random_section(const Grid& g, Rng& rng, double amplitude) {
  SectionField s(g);
  for (auto& v : s.values()) {
    const double re = rng.uniform(-amplitude, amplitude);
    const double im = rng.uniform(-amplitude, amplitude);
    v = cplx(re, im);
  }
  return s;
}

ScalarField random_scalar(const Grid& g, Rng& rng, double amplitude) {
  ScalarField z(g);
  for (auto& v : z.values()) v = rng.uniform(-amplitude, amplitude);
  return z;
}

}  // namespace swlat
