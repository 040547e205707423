#include "cusplab/weights.hpp"

#include "cusplab/errors.hpp"

#include <cmath>
#include <string>

namespace cusplab {

namespace {

void check_exponents(double p, int n, int m) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ParameterError("A_p test: p must be > 1, got " + std::to_string(p));
  if (!(m >= 0 && n > m))
    throw ParameterError("A_p test: need n > m >= 0, got n=" + std::to_string(n) +
                         ", m=" + std::to_string(m));
}

}  // namespace

PowerWeight PowerWeight::make(double mu, double p, int n, int m) {
  return {mu, p, n, m, is_muckenhoupt_ap(mu, p, n, m)};
}

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw ParameterError("conjugate_exponent: p must be > 1");
  return p / (p - 1.0);
}

bool is_muckenhoupt_ap(double mu, double p, int n, int m) {
  return ap_exponent_range(p, n, m).contains(mu);
}

OpenInterval ap_exponent_range(double p, int n, int m) {
  check_exponents(p, n, m);
  const double codim = n - m;
  return {-codim, codim * (p - 1.0)};
}

OpenInterval admissible_beta_interval(double gamma, double p, int n, int m) {
  check_exponents(p, n, m);
  if (!(gamma >= 1.0)) throw ParameterError("admissible_beta_interval: gamma must be >= 1");
  const double codim = n - m;
  const double pc = conjugate_exponent(p);
  const double shift = (gamma - 1.0) / pc;
  return {-gamma * codim / p - shift, gamma * codim / pc - shift};
}

double beta_hat(double beta, double gamma, double p) {
  if (!(gamma >= 1.0)) throw ParameterError("beta_hat: gamma must be >= 1");
  return (beta + (gamma - 1.0) / conjugate_exponent(p)) / gamma;
}

ScalarField upper_endpoint_witness(const CuspDomain& domain) {
  const double e = domain.gamma() - 1.0 - domain.gamma() * (domain.n() - domain.m());
  return ScalarField([e](const Point& pt) { return std::pow(pt.x, e) / (1.0 - std::log(pt.x)); });
}

}  // namespace cusplab
