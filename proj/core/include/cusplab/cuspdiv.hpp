#pragma once

#include "cusplab/bogovskii.hpp"
#include "cusplab/field.hpp"
#include "cusplab/geometry.hpp"
#include "cusplab/quadrature.hpp"
#include "cusplab/report.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cusplab {

/// g^(x^, y, z) = alpha x^^(alpha-1) f(x^^alpha, y, z) on the reference domain.
ScalarField pullback_density(const CuspDomain& domain, const ScalarField& f);

/// Discretisation knobs of the cusp divergence pipeline.
struct SolveParams {
  int order = 48;          ///< quadrature nodes per axis for the norms on Omega
  double grading = 3.0;    ///< grading of the Omega rule; the reference rule uses grading * gamma
  RayOrders rays{};        ///< polar Bogovskii node counts
  std::size_t probes = 20; ///< residual probes in Omega
  std::uint64_t seed = 1;
  double fd_step = 1e-3;   ///< residual stencil on Omega
  double mean_tol = 1e-6;
};

struct DivSolveReport {
  double beta = 0.0;
  double eta = 0.0;
  double p = 0.0;
  double gamma = 0.0;
  double beta_hat = 0.0;
  double mean_of_f = 0.0;
  double mean_of_g_hat = 0.0;
  double residual_max = 0.0;
  double norm_f = 0.0;       ///< ||f||_{L^p(d^{p beta})}
  double norm_u_low = 0.0;   ///< ||u||_{L^p(d^{p(eta-1)})}
  double norm_u_grad = 0.0;  ///< ||Du||_{L^p(d^{p eta})}
  double ratio = 0.0;
  int order = 0;
  double grading = 0.0;
  int ray_angular = 0;
  int ray_radial = 0;
  int ray_chord = 0;
  double probes = 0.0;

  /// Field names and values in a fixed order; the basis of every serialisation.
  [[nodiscard]] ReportFields fields() const;
  [[nodiscard]] std::string to_json() const;
  [[nodiscard]] static std::string csv_header();
  [[nodiscard]] std::string csv_row() const;
};

struct DivSolveResult {
  VectorField u;
  DivSolveReport report;
};

/// Solves div u = f on the cusp domain through the reference domain and the
/// Piola push-forward, then measures the residual and weighted norms.
/// Throws BetaOutOfRange, EtaTooSmall, NotMeanZero or ApViolation.
DivSolveResult solve_divergence_cusp(const CuspDomain& domain, const ScalarField& f, double beta,
                                     double eta, double p, const SolveParams& params = {});

struct HardyResult {
  double lhs;    ///< ||v / x||_{L^p(x^{p kappa})}
  double rhs;    ///< ||dv/dx||_{L^p(x^{p kappa})}
  double bound;  ///< p / |p kappa - p + 1|
};

/// Fibre-wise Hardy inequality in x. v must declare compact support; it is
/// spot-checked to vanish at 100 near-boundary probes.
HardyResult hardy_check(const CuspDomain& domain, const ScalarField& v, double kappa, double p,
                        const QuadratureRule& rule);

/// Smooth bump with analytic gradient, declared compactly supported.
ScalarField bump_field(const Point& center, double radius);

/// `count` bumps centred at deterministic interior points, each with radius
/// 0.6 times the local boundary clearance.
std::vector<ScalarField> random_interior_bumps(const CuspDomain& domain, std::size_t count,
                                               std::uint64_t seed);

/// Deterministic points within a thin layer along the boundary.
std::vector<Point> near_boundary_probes(const CuspDomain& domain, std::size_t count);

}  // namespace cusplab
