#pragma once

#include "cusplab/geometry.hpp"
#include "cusplab/quadrature.hpp"
#include "cusplab/report.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cusplab {

// ---------------------------------------------------------------------------
// Meshes of the planar profile {eps < x < 1, |y| < x^gamma}.

struct GradedMesh {
  CuspDomain domain{1.0, 1, 0};
  int level = 0;
  double grading = 1.0;
  double eps_mesh = 0.0;
  int cross_cells = 0;  ///< triangle pairs across each layer
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> cells;  ///< counter-clockwise
  std::vector<char> on_boundary;          ///< per vertex

  [[nodiscard]] std::size_t cell_count() const { return cells.size(); }
  [[nodiscard]] double area() const;
  [[nodiscard]] double cell_area(std::size_t c) const;
};

/// Layers of width 2 x^grading / J between x = eps_mesh and x = 1, with
/// J = base_cross 2^level cells across, so each layer is about as long as its
/// cross-section cells are tall (geometric widths when grading = 1).
GradedMesh build_graded_mesh(const CuspDomain& domain, int level, double grading, double eps_mesh,
                             int base_cross = 4);

// ---------------------------------------------------------------------------
// Linear-plus-bubble velocity, linear pressure.

using SparseMatrix = Eigen::SparseMatrix<double>;

struct DiscreteSaddle {
  SparseMatrix A;        ///< H^1 inner product on velocities vanishing on the boundary
  SparseMatrix B;        ///< (q, div v), pressure rows by velocity columns
  SparseMatrix M_omega;  ///< pressure mass weighted by d^weight_exponent
  SparseMatrix M;        ///< plain pressure mass
  double weight_exponent = 0.0;
};

DiscreteSaddle assemble_stokes(const GradedMesh& mesh, double pressure_weight_exponent);

struct EigenOptions {
  int max_iter = 600;
  double tol = 1e-10;  ///< relative Ritz residual
  std::uint64_t seed = 1;
};

/// sqrt of the smallest eigenvalue of B A^{-1} B^T q = lambda M_omega q over
/// pressures with weighted mean zero. Lanczos in the M_omega inner product.
double inf_sup_constant(const DiscreteSaddle& saddle, const EigenOptions& opts = {});

/// Same quantity from a dense generalized eigensolve; small meshes only.
double inf_sup_constant_dense(const DiscreteSaddle& saddle);

struct Ball2 {
  std::array<double, 2> center{0.75, 0.0};
  double radius = 0.125;
};

/// Weight exponents of the Korn quotient
///   ||Du||^2_{d^grad} / (||u||^2_{L^2(B)} + ||eps(u)||^2_{d^sym}).
struct KornWeights {
  double grad_exponent = 0.0;
  double sym_exponent = 0.0;

  /// 2 beta on the gradient, 2 (beta + 1 - gamma) on the symmetric gradient.
  static KornWeights theorem(double beta, double gamma) {
    return {2.0 * beta, 2.0 * (beta + 1.0 - gamma)};
  }
};

struct KornSystem {
  SparseMatrix K1;  ///< ball mass + weighted eps(u) Gram matrix
  SparseMatrix K2;  ///< weighted gradient Gram matrix
};

/// No boundary conditions; rigid motions are controlled by the ball term.
KornSystem assemble_korn(const GradedMesh& mesh, const KornWeights& weights, const Ball2& ball = {});

/// sqrt of the largest eigenvalue of K2 u = mu K1 u.
double korn_constant(const KornSystem& system, const EigenOptions& opts = {});
double korn_constant_dense(const KornSystem& system);

/// Korn constant with the theorem's weights for beta >= 0.
double korn_constant(const GradedMesh& mesh, double beta, double gamma, const Ball2& ball = {},
                     const EigenOptions& opts = {});

// ---------------------------------------------------------------------------
// Refinement studies.

struct StudyParams {
  int levels = 3;
  double eps0 = 0.1;  ///< eps_mesh = eps0 4^{-level}
  int base_cross = 4;
  double grading = 0.0;  ///< 0 selects gamma
  EigenOptions eig{};
};

struct LevelConstant {
  int level;
  std::size_t cells;
  double eps_mesh;
  double constant;
};

struct ConstantStudy {
  std::string kind;  ///< "infsup" or "korn"
  double gamma = 0.0;
  double weight_exponent = 0.0;  ///< pressure weight, or the gradient weight for Korn
  double sym_exponent = 0.0;     ///< Korn only
  StudyParams params;
  std::vector<LevelConstant> levels;

  [[nodiscard]] ReportFields fields() const;
  /// Header "level,cells,eps_mesh,constant".
  [[nodiscard]] std::string csv() const;
  /// constant[last] / constant[last - 1].
  [[nodiscard]] double last_ratio() const;
  [[nodiscard]] bool strictly_decreasing() const;
  [[nodiscard]] bool strictly_increasing() const;
};

ConstantStudy inf_sup_study(const CuspDomain& domain, double weight_exponent,
                            const StudyParams& params = {});
ConstantStudy korn_study(const CuspDomain& domain, const KornWeights& weights,
                         const StudyParams& params = {}, const Ball2& ball = {});

// ---------------------------------------------------------------------------
// p = 1/x_1^2 - c on the gamma = 2 profile.

struct CounterexampleParams {
  int order = 64;
  double grading = 3.0;
  std::uint64_t seed = 1;
  int bumps = 5;
  std::vector<double> truncations{1e-1, 1e-2, 1e-3};
};

struct WeakIdentityRow {
  double lhs;  ///< int p d(phi)/dx_1
  double rhs;  ///< int (-2 x_2 / x_1^3) d(phi)/dx_2
  double rel;
};

struct CounterexampleReport {
  double integral_inv_x2 = 0.0;
  double area = 0.0;
  double c_star = 0.0;               ///< from the numerical mean projection
  double stated_constant = 6.0;  ///< the constant usually quoted for this example
  double mean_with_stated_constant = 0.0;  ///< int (1/x_1^2 - 6)
  std::vector<std::pair<double, double>> truncated;  ///< (eps, int_{x>eps} p^2)
  double truncated_growth = 0.0;     ///< ratio of the last two truncated integrals
  double weighted_norm_sq = 0.0;     ///< ||p||^2 in L^2(|x|^2)
  double dx2_norm_sq = 0.0;          ///< ||-2 x_2 / x_1^3||^2
  std::vector<WeakIdentityRow> weak;
  double weak_max_rel = 0.0;
  double r0 = 0.0;
  double r = 0.0;                    ///< 0.9 r0
  std::vector<std::pair<int, double>> lr_integrals;  ///< (order, int |p|^r)
  double lr_rel_change = 0.0;        ///< between the last two orders

  [[nodiscard]] ReportFields fields() const;
};

/// r0 = 2 - 4 (gamma - 1) / (gamma (k + 2) - 1).
double integrability_exponent(double gamma, int k);

CounterexampleReport counterexample_report(const CuspDomain& domain,
                                           const CounterexampleParams& params = {});

/// Lifted-measure identity applied to |g|^p.
LiftedIdentity lifted_korn_transfer_check(const CuspDomain& domain, int n_prime, double s,
                                          const ScalarField& g, double p = 2.0, int order = 64,
                                          double grading = 3.0);

}  // namespace cusplab
