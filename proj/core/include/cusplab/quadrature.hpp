#pragma once

#include "cusplab/field.hpp"
#include "cusplab/geometry.hpp"

#include <iosfwd>
#include <vector>

namespace cusplab {

/// Gauss-Legendre rule on (0, 1).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule on (0, 1). Thread-safe.
const GaussRule& gauss_legendre(int n);

/// Graded product rule on a cusp domain, optionally truncated to x > x_min.
///
/// The box (0,1) x B_1^k x (0,1)^m is mapped onto the domain through
/// x = x_min + (1 - x_min) t^grading, y = x^gamma u, z = z; the weights carry
/// the full Jacobian. k = 1 uses Gauss nodes on (-1, 1); k = 2 a polar
/// product (Gauss in r, trapezoid in angle).
struct QuadratureRule {
  CuspDomain domain;
  int order = 0;
  double grading = 1.0;
  double x_min = 0.0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<double> dist;  ///< d_M at each node

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  [[nodiscard]] double total_weight() const;
};

QuadratureRule make_rule(const CuspDomain& domain, int order, double grading,
                         double x_min = 0.0);

/// Integral of f d_M^weight_exponent over the rule's domain.
double integrate(const QuadratureRule& rule, const ScalarField& f, double weight_exponent = 0.0);

/// (integral |f|^p d_M^weight_exponent)^(1/p).
double weighted_lp_norm(const QuadratureRule& rule, const ScalarField& f, double p,
                        double weight_exponent = 0.0);

/// (sum_j integral |u_j|^p d_M^weight_exponent)^(1/p) for a vector field.
double weighted_lp_norm(const QuadratureRule& rule, const VectorField& u, double p,
                        double weight_exponent = 0.0);

/// f - (integral f w / integral w) with w = d_M^weight_exponent.
ScalarField project_mean_zero(const QuadratureRule& rule, const ScalarField& f,
                              double weight_exponent = 0.0);

/// Weighted mean (integral f w / integral w).
double weighted_mean(const QuadratureRule& rule, const ScalarField& f, double weight_exponent = 0.0);

/// Central differences with one Richardson step (h, h/2); error O(h^4).
/// When `domain` is given every stencil point must lie inside it.
Coords fd_gradient(const ScalarField& f, const Point& pt, double h,
                   const CuspDomain* domain = nullptr);

/// Jacobian of a vector field by the same stencil; jac[j][i] = d u_j / d x_i.
Jacobian fd_jacobian(const VectorField& u, const Point& pt, double h,
                     const CuspDomain* domain = nullptr);

/// Debug dump: header "x,y1..,z1..,weight", one row per node.
void write_rule_csv(std::ostream& os, const QuadratureRule& rule);

/// Product rule on a Euclidean ball in R^d (d <= 3): Gauss in the radius,
/// trapezoid in periodic angles, Gauss in the polar angle for d = 3.
struct BallRule {
  std::vector<Coords> nodes;
  std::vector<double> weights;
};

BallRule make_ball_rule(const Coords& center, double radius, int radial, int angular);

/// Integrand on a lifted domain: (base point, z' in R^{n'}).
using LiftedIntegrand = std::function<double(const Point&, const Coords&)>;

/// Integral over the lifted domain by an explicit (n + n')-dimensional product rule.
double integrate_lifted(const LiftedDomain& lifted, const LiftedIntegrand& g, int order,
                        double grading);

}  // namespace cusplab
