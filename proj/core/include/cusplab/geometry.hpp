#pragma once

#include "cusplab/field.hpp"

#include <string>

namespace cusplab {

/// Omega = {(x, y, z) in (0,1) x R^k x (0,1)^m : |y| < x^gamma}, n = m + k + 1.
/// gamma == 1 is the convex reference domain.
class CuspDomain {
 public:
  CuspDomain(double gamma, int k, int m);

  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double alpha() const { return 1.0 / gamma_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int n() const { return m_ + k_ + 1; }
  [[nodiscard]] bool is_reference() const { return gamma_ == 1.0; }

  /// The gamma = 1 domain with the same (k, m).
  [[nodiscard]] CuspDomain reference() const { return {1.0, k_, m_}; }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const CuspDomain&, const CuspDomain&) = default;

 private:
  double gamma_;
  int k_;
  int m_;
};

/// Omega^{n',s}: base points (x, y, z) extended by z' in R^{n'} with |z'| < x^s.
struct LiftedDomain {
  CuspDomain base;
  int n_prime;
  double s;

  LiftedDomain(CuspDomain base_, int n_prime_, double s_);

  /// The (n', s) pair with s * n' = p * beta, s in (0, gamma], smallest n'.
  static LiftedDomain for_exponent(const CuspDomain& base, double p, double beta);
};

/// Throws ShapeError unless pt has len(y) = k and len(z) = m.
void check_shape(const CuspDomain& domain, const Point& pt);

/// Strict interior test: 0 < x < 1, |y| < x^gamma, 0 < z_i < 1.
bool contains(const CuspDomain& domain, const Point& pt);

/// Euclidean distance to M = {0} x [0,1]^m, with z clamped onto [0,1]^m.
double dist_to_cusp(const CuspDomain& domain, const Point& pt);

/// Cheap lower estimate of the distance from an interior point to the boundary.
/// Used to size finite-difference stencils; returns 0 outside the domain.
double boundary_clearance(const CuspDomain& domain, const Point& pt);

struct MappedPoint {
  Point pt;
  double det;  ///< Jacobian determinant of the map at the source point
};

/// F(x^, y^, z^) = (x^^alpha, y^, z^), det DF = alpha x^^(alpha - 1).
MappedPoint cusp_map(const CuspDomain& domain, const Point& pt_hat);

/// F^{-1}(x, y, z) = (x^gamma, y, z), det DF^{-1} = gamma x^(gamma - 1).
MappedPoint cusp_map_inverse(const CuspDomain& domain, const Point& pt);

/// Piola push-forward of a field on the reference domain:
///   u_1(x,y,z) = v_1(x^gamma, y, z),  u_j(x,y,z) = gamma x^(gamma-1) v_j(x^gamma, y, z).
/// The returned field carries a Jacobian whenever v_hat does.
VectorField piola_pushforward(const CuspDomain& domain, VectorField v_hat);

struct LiftedIdentity {
  double lhs;  ///< integral of g over the lifted domain
  double rhs;  ///< vol(B_1^{n'}) * integral over the base of g x^{s n'}
};

/// Both sides of the lifted-measure identity for g depending on base coordinates only.
LiftedIdentity lifted_integral_identity(const LiftedDomain& lifted, const ScalarField& g,
                                        int order = 64, double grading = 3.0);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace cusplab
