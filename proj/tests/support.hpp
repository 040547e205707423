#pragma once

#include "cusplab/field.hpp"
#include "cusplab/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

/// Uniform-ish interior point with x in [x_lo, x_hi] and |y| < frac x^gamma.
inline cusplab::Point random_interior(Rng& rng, const cusplab::CuspDomain& d, double x_lo = 0.05,
                                      double x_hi = 0.95, double frac = 0.9) {
  cusplab::Point pt;
  pt.x = rng.uniform(x_lo, x_hi);
  const double w = std::pow(pt.x, d.gamma());
  if (d.k() == 1) {
    pt.y.push_back(frac * w * rng.uniform(-1.0, 1.0));
  } else {
    const double r = frac * w * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 6.283185307179586);
    pt.y.push_back(r * std::cos(a));
    pt.y.push_back(r * std::sin(a));
  }
  for (int i = 0; i < d.m(); ++i) pt.z.push_back(rng.uniform(0.05, 0.95));
  return pt;
}

}  // namespace testing
