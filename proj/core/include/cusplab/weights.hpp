#pragma once

#include "cusplab/field.hpp"
#include "cusplab/geometry.hpp"

namespace cusplab {

/// The power weight d_M^mu together with the data of the A_p test it serves.
struct PowerWeight {
  double mu;
  double p;
  int n;
  int m;
  bool in_ap;  ///< equals is_muckenhoupt_ap(mu, p, n, m)

  static PowerWeight make(double mu, double p, int n, int m);
};

/// Open interval (lo, hi); membership is strict at both ends.
struct OpenInterval {
  double lo;
  double hi;
  [[nodiscard]] bool contains(double v) const { return v > lo && v < hi; }
};

/// Conjugate exponent p' = p / (p - 1).
double conjugate_exponent(double p);

/// d_M^mu is in A_p iff -(n-m) < mu < (n-m)(p-1).
bool is_muckenhoupt_ap(double mu, double p, int n, int m);

/// The open A_p range of mu.
OpenInterval ap_exponent_range(double p, int n, int m);

/// Admissible beta for the cusp divergence estimate:
///   ( -gamma(n-m)/p - (gamma-1)/p',  gamma(n-m)/p' - (gamma-1)/p' ).
OpenInterval admissible_beta_interval(double gamma, double p, int n, int m);

/// Exponent transported to the reference domain: alpha (beta + (gamma-1)/p').
double beta_hat(double beta, double gamma, double p);

/// f = (1 - log x)^{-1} x^{gamma - 1 - gamma(n-m)}: lies in L^p(d_M^{p beta}) for
/// beta at or above the upper admissible endpoint but not in L^1.
ScalarField upper_endpoint_witness(const CuspDomain& domain);

}  // namespace cusplab
