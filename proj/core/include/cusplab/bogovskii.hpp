#pragma once

#include "cusplab/field.hpp"
#include "cusplab/geometry.hpp"
#include "cusplab/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cusplab {

/// phi(p) = c exp(-1 / (1 - |p - center|^2 / radius^2)) inside the ball, 0 outside,
/// with c chosen so that the integral of phi is one.
struct BumpFunction {
  Coords center;
  double radius = 0.0;
  double normalization = 0.0;

  static BumpFunction make(Coords center, double radius);
};

double bump_eval(const BumpFunction& phi, const Coords& pt);
double bump_eval(const BumpFunction& phi, const Point& pt);
Coords bump_gradient(const BumpFunction& phi, const Coords& pt);

/// The reference domain together with the ball it is star-shaped with respect to.
struct StarDomain {
  CuspDomain reference;
  BumpFunction phi;

  /// Ball centre (3/4, 0_k, 1/2 1_m), radius 1/8.
  static StarDomain standard(int k, int m);
};

/// {r >= 1 : |y + r (x - y) - center| <= radius}.
struct RInterval {
  double lo;
  double hi;
};

std::optional<RInterval> kernel_r_interval(const Coords& x, const Coords& y,
                                           const BumpFunction& phi);

/// G(x, y) = (x - y) int_1^inf phi(y + r (x - y)) r^{n-1} dr (cut-off psi = 1).
Coords bogovskii_kernel(const BumpFunction& phi, const Coords& x,
                        const Coords& y, int order = 32);

/// u(x) = int G(x, y) f(y) dy summed over the nodes of `rule`, dropping the
/// node nearest to x. Checks the mean of f on the same rule.
Coords bogovskii_eval(const StarDomain& domain, const ScalarField& f, const Point& x,
                      const QuadratureRule& rule, double mean_tol = 1e-6);

/// Node counts of the polar evaluator.
struct RayOrders {
  int angular = 24;  ///< Gauss nodes per direction arc (n = 2) or per polar angle (n = 3)
  int radial = 24;   ///< Gauss nodes along the backward ray x - rho theta
  int chord = 24;    ///< Gauss nodes along the chord through the ball
};

/// Bogovskii's field evaluated in polar coordinates centred at x.
///
/// With y = x - rho theta the kernel singularity cancels against the polar
/// Jacobian and
///   u(x) = int_{S^{n-1}} theta int_0^{R(theta)} f(x - rho theta)
///          int_0^inf phi(x + xi theta) (rho + xi)^{n-1} dxi drho dtheta,
/// where R(theta) is the exit distance from the reference domain along -theta.
/// Only directions whose forward ray meets the ball contribute. In 2D the
/// direction arc is split where -theta points at a corner, so every piece
/// of the integrand is smooth.
class BogovskiiSolver {
 public:
  BogovskiiSolver(StarDomain domain, ScalarField f, const QuadratureRule& mean_rule,
                  RayOrders orders = {}, double mean_tol = 1e-6);

  /// u(x); throws DomainError unless x is interior to the reference domain.
  [[nodiscard]] Coords operator()(const Point& x) const;

  /// Du(x) by Richardson differences with step min(fd_step, clearance / 4).
  [[nodiscard]] Jacobian jacobian(const Point& x) const;

  /// Self-contained field; safe to keep after the solver is gone.
  [[nodiscard]] VectorField field() const;

  [[nodiscard]] double measured_mean() const { return mean_; }
  [[nodiscard]] const StarDomain& domain() const { return domain_; }
  [[nodiscard]] const RayOrders& orders() const { return orders_; }

  double fd_step = 2e-3;

 private:
  [[nodiscard]] Coords eval_unchecked(const Coords& x) const;
  [[nodiscard]] double exit_distance(const Coords& x, const Coords& dir) const;

  StarDomain domain_;
  ScalarField f_;
  RayOrders orders_;
  double mean_ = 0.0;
};

struct ResidualReport {
  double max_rel = 0.0;
  std::vector<double> per_probe;
  double f_scale = 0.0;  ///< max |f| over probes
};

/// |div u(x) - f(x)| / max_probes |f| using Richardson differences with step h.
ResidualReport div_residual(const CuspDomain& domain, const ScalarField& f, const VectorField& u,
                            std::span<const Point> probes, double h);

/// Deterministic interior probes: x in [x_lo, x_hi], |y| <= y_frac x^gamma,
/// z in [0.2, 0.8]^m. Same seed, same points on every platform.
std::vector<Point> interior_probes(const CuspDomain& domain, std::size_t count, std::uint64_t seed,
                                   double x_lo = 0.2, double x_hi = 0.9, double y_frac = 0.6);

}  // namespace cusplab
