#include "cusplab/geometry.hpp"

#include "cusplab/errors.hpp"
#include "cusplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cusplab {

CuspDomain::CuspDomain(double gamma, int k, int m) : gamma_(gamma), k_(k), m_(m) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma))
    throw ParameterError("CuspDomain: gamma must be >= 1, got " + std::to_string(gamma));
  if (k < 1) throw ParameterError("CuspDomain: k must be >= 1, got " + std::to_string(k));
  if (m < 0) throw ParameterError("CuspDomain: m must be >= 0, got " + std::to_string(m));
  if (static_cast<std::size_t>(n()) > kMaxDim)
    throw ParameterError("CuspDomain: ambient dimension " + std::to_string(n()) + " too large");
}

std::string CuspDomain::to_string() const {
  std::ostringstream os;
  os << "CuspDomain(gamma=" << gamma_ << ", k=" << k_ << ", m=" << m_ << ")";
  return os.str();
}

LiftedDomain::LiftedDomain(CuspDomain base_, int n_prime_, double s_)
    : base(base_), n_prime(n_prime_), s(s_) {
  if (n_prime < 0) throw ParameterError("LiftedDomain: n' must be >= 0");
  if (!(s > 0.0) || s > base.gamma())
    throw ParameterError("LiftedDomain: s must lie in (0, gamma]");
  if (static_cast<std::size_t>(base.n() + n_prime) > kMaxDim)
    throw ParameterError("LiftedDomain: lifted dimension too large");
}

LiftedDomain LiftedDomain::for_exponent(const CuspDomain& base, double p, double beta) {
  const double target = p * beta;
  if (target < 0.0) throw ParameterError("LiftedDomain: p * beta must be >= 0");
  if (target == 0.0) return {base, 0, base.gamma()};
  const int n_prime = static_cast<int>(std::ceil(target / base.gamma() - 1e-12));
  return {base, n_prime, target / n_prime};
}

void check_shape(const CuspDomain& domain, const Point& pt) {
  if (static_cast<int>(pt.y.size()) != domain.k() || static_cast<int>(pt.z.size()) != domain.m()) {
    std::ostringstream os;
    os << "point " << pt.to_string() << " does not match " << domain.to_string()
       << " (len(y) must be " << domain.k() << ", len(z) must be " << domain.m() << ")";
    throw ShapeError(os.str());
  }
}

bool contains(const CuspDomain& domain, const Point& pt) {
  check_shape(domain, pt);
  if (!(pt.x > 0.0 && pt.x < 1.0)) return false;
  if (!(norm(pt.y) < std::pow(pt.x, domain.gamma()))) return false;
  return std::all_of(pt.z.begin(), pt.z.end(), [](double z) { return z > 0.0 && z < 1.0; });
}

double dist_to_cusp(const CuspDomain& domain, const Point& pt) {
  check_shape(domain, pt);
  double s = pt.x * pt.x;
  for (double y : pt.y) s += y * y;
  for (double z : pt.z) {
    const double dz = z - std::clamp(z, 0.0, 1.0);
    s += dz * dz;
  }
  return std::sqrt(s);
}

double boundary_clearance(const CuspDomain& domain, const Point& pt) {
  if (!contains(domain, pt)) return 0.0;
  const double g = domain.gamma();
  const double x = pt.x;
  // Lipschitz bound of x^gamma - |y| in a neighbourhood of the point.
  const double slope = g * std::pow(std::min(1.0, 2.0 * x), g - 1.0);
  double c = (std::pow(x, g) - norm(pt.y)) / std::sqrt(1.0 + slope * slope);
  c = std::min(c, 1.0 - x);
  for (double z : pt.z) c = std::min({c, z, 1.0 - z});
  return std::max(c, 0.0);
}

MappedPoint cusp_map(const CuspDomain& domain, const Point& pt_hat) {
  check_shape(domain, pt_hat);
  if (!(pt_hat.x > 0.0))
    throw DomainError("cusp_map: x^ must be positive, got point " + pt_hat.to_string());
  const double a = domain.alpha();
  MappedPoint out{pt_hat, a * std::pow(pt_hat.x, a - 1.0)};
  out.pt.x = std::pow(pt_hat.x, a);
  return out;
}

MappedPoint cusp_map_inverse(const CuspDomain& domain, const Point& pt) {
  check_shape(domain, pt);
  if (!(pt.x > 0.0))
    throw DomainError("cusp_map_inverse: x must be positive, got point " + pt.to_string());
  const double g = domain.gamma();
  MappedPoint out{pt, g * std::pow(pt.x, g - 1.0)};
  out.pt.x = std::pow(pt.x, g);
  return out;
}

VectorField piola_pushforward(const CuspDomain& domain, VectorField v_hat) {
  const double g = domain.gamma();
  VectorField u;
  u.support = v_hat.support;
  // Closed form of (det DF)^{-1} DF v^ o F^{-1}; DF is diagonal with entry
  // alpha x^^(alpha-1) in the first slot, so only u_2..u_n pick up the factor.
  u.value = [domain, g, v = v_hat.value](const Point& pt) {
    if (!contains(domain, pt))
      throw DomainError("piola_pushforward: " + pt.to_string() + " is outside " + domain.to_string());
    Point hat = pt;
    const double xg1 = std::pow(pt.x, g - 1.0);
    hat.x = xg1 * pt.x;
    Coords val = v(hat);
    const double scale = g * xg1;
    for (std::size_t j = 1; j < val.size(); ++j) val[j] *= scale;
    return val;
  };
  if (v_hat.jacobian) {
    u.jacobian = [domain, g, v = v_hat.value, jv = v_hat.jacobian](const Point& pt) {
      if (!contains(domain, pt))
        throw DomainError("piola_pushforward: " + pt.to_string() + " is outside " + domain.to_string());
      Point hat = pt;
      const double xg1 = std::pow(pt.x, g - 1.0);
      hat.x = xg1 * pt.x;
      const Coords val = v(hat);
      Jacobian jh = jv(hat);
      const double dxhat = g * xg1;  // d x^ / d x
      const double scale = g * xg1;
      const double dscale = g * (g - 1.0) * (g == 1.0 ? 0.0 : std::pow(pt.x, g - 2.0));
      Jacobian jac = jh;
      jac[0][0] = jh[0][0] * dxhat;
      for (std::size_t j = 1; j < jh.size(); ++j) {
        jac[j][0] = dscale * val[j] + scale * dxhat * jh[j][0];
        for (std::size_t i = 1; i < jh[j].size(); ++i) jac[j][i] = scale * jh[j][i];
      }
      return jac;
    };
  }
  return u;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

LiftedIdentity lifted_integral_identity(const LiftedDomain& lifted, const ScalarField& g, int order,
                                        double grading) {
  LiftedIdentity out{};
  out.lhs = integrate_lifted(
      lifted, [&g](const Point& pt, const Coords&) { return g(pt); }, order, grading);
  const QuadratureRule rule = make_rule(lifted.base, order, grading);
  const double e = lifted.s * lifted.n_prime;
  const ScalarField weighted(
      [&g, e](const Point& pt) { return g(pt) * std::pow(pt.x, e); });
  out.rhs = unit_ball_volume(lifted.n_prime) * integrate(rule, weighted);
  return out;
}

}  // namespace cusplab
