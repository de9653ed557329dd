#pragma once

#include <cstdint>
#include <random>

#include "swlat/lattice.hpp"

namespace swlat {

/// Seeded generator whose uniform draws depend only on the mt19937_64 bit
/// stream, so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

/// i.i.d. uniform in [-amplitude, amplitude] per real degree of freedom.
GaugeField random_gauge(const Grid& g, Rng& rng, double amplitude);
SectionField random_section(const Grid& g, Rng& rng, double amplitude);
ScalarField random_scalar(const Grid& g, Rng& rng, double amplitude);

}  // namespace swlat
