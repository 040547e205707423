#include "cusplab/quadrature.hpp"

#include "cusplab/errors.hpp"
#include "cusplab/parallel.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <limits>
#include <sstream>

namespace cusplab {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    const auto zeros = boost::math::legendre_p_zeros<double>(n);  // non-negative half
    std::vector<std::pair<double, double>> full;
    for (double x : zeros) {
      const double dp = boost::math::legendre_p_prime<double>(n, x);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      full.emplace_back(x, w);
      if (x != 0.0) full.emplace_back(-x, w);
    }
    std::sort(full.begin(), full.end());
    for (auto [x, w] : full) {
      rule->nodes.push_back(0.5 * (1.0 + x));
      rule->weights.push_back(0.5 * w);
    }
    slot = std::move(rule);
  }
  return *slot;
}

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

/// Unit-ball cross-section rule in R^k (k = 1, 2): nodes u and weights.
struct CrossSection {
  std::vector<Coords> nodes;
  std::vector<double> weights;
};

CrossSection unit_cross_section(int k, int order) {
  CrossSection cs;
  const GaussRule& g = gauss_legendre(order);
  if (k == 1) {
    for (int i = 0; i < order; ++i) {
      cs.nodes.push_back(Coords{2.0 * g.nodes[i] - 1.0});
      cs.weights.push_back(2.0 * g.weights[i]);
    }
  } else if (k == 2) {
    const double dphi = 2.0 * std::numbers::pi / order;
    for (int i = 0; i < order; ++i) {
      const double r = g.nodes[i];
      for (int j = 0; j < order; ++j) {
        const double phi = (j + 0.5) * dphi;
        cs.nodes.push_back(Coords{r * std::cos(phi), r * std::sin(phi)});
        cs.weights.push_back(g.weights[i] * r * dphi);
      }
    }
  } else {
    throw ParameterError("quadrature: cross sections with k >= 3 are not supported (k=" +
                         std::to_string(k) + ")");
  }
  return cs;
}

void check_finite(double v, const Point& pt, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << ": non-finite field value " << v << " at node " << pt.to_string();
    throw EvaluationError(os.str());
  }
}

template <class Fn>
double reduce_nodes(const QuadratureRule& rule, Fn&& fn, const char* what) {
  std::vector<double> vals(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const double v = fn(i);
    check_finite(v, rule.nodes[i], what);
    vals[i] = v;
  });
  double s = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) s += rule.weights[i] * vals[i];
  return s;
}

double weight_at(const QuadratureRule& rule, std::size_t i, double exponent) {
  return exponent == 0.0 ? 1.0 : std::pow(rule.dist[i], exponent);
}

}  // namespace

QuadratureRule make_rule(const CuspDomain& domain, int order, double grading, double x_min) {
  if (order < 2) throw ParameterError("make_rule: N must be >= 2, got " + std::to_string(order));
  if (!(grading >= 1.0)) throw ParameterError("make_rule: grading must be >= 1");
  if (!(x_min >= 0.0 && x_min < 1.0)) throw ParameterError("make_rule: x_min must lie in [0, 1)");

  QuadratureRule rule{domain, order, grading, x_min, {}, {}, {}};
  const GaussRule& g = gauss_legendre(order);
  const CrossSection cs = unit_cross_section(domain.k(), order);
  const int m = domain.m();

  std::size_t z_count = 1;
  for (int i = 0; i < m; ++i) z_count *= static_cast<std::size_t>(order);

  const double span = 1.0 - x_min;
  const double gamma = domain.gamma();
  for (int it = 0; it < order; ++it) {
    const double t = g.nodes[it];
    const double x = x_min + span * std::pow(t, grading);
    const double dx = span * grading * std::pow(t, grading - 1.0) * g.weights[it];
    const double radius = std::pow(x, gamma);
    const double section = std::pow(radius, domain.k());
    for (std::size_t ic = 0; ic < cs.nodes.size(); ++ic) {
      Coords y;
      for (double u : cs.nodes[ic]) y.push_back(radius * u);
      for (std::size_t iz = 0; iz < z_count; ++iz) {
        Coords z;
        double wz = 1.0;
        std::size_t rem = iz;
        for (int d = 0; d < m; ++d) {
          const std::size_t idx = rem % static_cast<std::size_t>(order);
          rem /= static_cast<std::size_t>(order);
          z.push_back(g.nodes[idx]);
          wz *= g.weights[idx];
        }
        Point pt(x, y, z);
        rule.dist.push_back(dist_to_cusp(domain, pt));
        rule.nodes.push_back(std::move(pt));
        rule.weights.push_back(dx * section * cs.weights[ic] * wz);
      }
    }
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const ScalarField& f, double weight_exponent) {
  return reduce_nodes(
      rule, [&](std::size_t i) { return f(rule.nodes[i]) * weight_at(rule, i, weight_exponent); },
      "integrate");
}

double weighted_lp_norm(const QuadratureRule& rule, const ScalarField& f, double p,
                        double weight_exponent) {
  if (!(p >= 1.0)) throw ParameterError("weighted_lp_norm: p must be >= 1");
  const double s = reduce_nodes(
      rule,
      [&](std::size_t i) {
        return std::pow(std::abs(f(rule.nodes[i])), p) * weight_at(rule, i, weight_exponent);
      },
      "weighted_lp_norm");
  return std::pow(s, 1.0 / p);
}

double weighted_lp_norm(const QuadratureRule& rule, const VectorField& u, double p,
                        double weight_exponent) {
  if (!(p >= 1.0)) throw ParameterError("weighted_lp_norm: p must be >= 1");
  const double s = reduce_nodes(
      rule,
      [&](std::size_t i) {
        double acc = 0.0;
        for (double c : u(rule.nodes[i])) acc += std::pow(std::abs(c), p);
        return acc * weight_at(rule, i, weight_exponent);
      },
      "weighted_lp_norm");
  return std::pow(s, 1.0 / p);
}

double weighted_mean(const QuadratureRule& rule, const ScalarField& f, double weight_exponent) {
  double mass = 0.0;
  try {
    mass = integrate(rule, constant_field(1.0), weight_exponent);
  } catch (const EvaluationError&) {
    mass = std::numeric_limits<double>::infinity();
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    std::ostringstream os;
    os << "weighted_mean: weight d_M^" << weight_exponent << " integrates to " << mass;
    throw WeightError(os.str());
  }
  return integrate(rule, f, weight_exponent) / mass;
}

ScalarField project_mean_zero(const QuadratureRule& rule, const ScalarField& f,
                              double weight_exponent) {
  const double mean = weighted_mean(rule, f, weight_exponent);
  ScalarField out([v = f.value, mean](const Point& p) { return v(p) - mean; }, f.gradient,
                  f.support);
  return out;
}

namespace {

template <class Eval>
auto richardson(const Point& pt, std::size_t i, double h, const CuspDomain* domain, Eval&& eval) {
  auto shifted = [&](double d) {
    Point q = pt;
    q[i] += d;
    if (domain && !contains(*domain, q)) {
      std::ostringstream os;
      os << "fd stencil point " << q.to_string() << " (h=" << h << ") leaves "
         << domain->to_string();
      throw StencilError(os.str());
    }
    return eval(q);
  };
  const auto fp = shifted(h);
  const auto fm = shifted(-h);
  const auto fp2 = shifted(0.5 * h);
  const auto fm2 = shifted(-0.5 * h);
  return std::make_tuple(fp, fm, fp2, fm2);
}

}  // namespace

Coords fd_gradient(const ScalarField& f, const Point& pt, double h, const CuspDomain* domain) {
  if (!(h > 0.0)) throw ParameterError("fd_gradient: h must be positive");
  if (domain) check_shape(*domain, pt);
  Coords grad;
  for (std::size_t i = 0; i < pt.dim(); ++i) {
    const auto [fp, fm, fp2, fm2] = richardson(pt, i, h, domain, [&](const Point& q) { return f(q); });
    const double coarse = (fp - fm) / (2.0 * h);
    const double fine = (fp2 - fm2) / h;
    grad.push_back((4.0 * fine - coarse) / 3.0);
  }
  return grad;
}

Jacobian fd_jacobian(const VectorField& u, const Point& pt, double h, const CuspDomain* domain) {
  if (!(h > 0.0)) throw ParameterError("fd_jacobian: h must be positive");
  if (domain) check_shape(*domain, pt);
  const std::size_t n = pt.dim();
  Jacobian jac;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [fp, fm, fp2, fm2] = richardson(pt, i, h, domain, [&](const Point& q) { return u(q); });
    if (i == 0) jac.assign(fp.size(), Coords(n, 0.0));
    for (std::size_t j = 0; j < fp.size(); ++j) {
      const double coarse = (fp[j] - fm[j]) / (2.0 * h);
      const double fine = (fp2[j] - fm2[j]) / h;
      jac[j][i] = (4.0 * fine - coarse) / 3.0;
    }
  }
  return jac;
}

void write_rule_csv(std::ostream& os, const QuadratureRule& rule) {
  os << "x";
  for (int i = 0; i < rule.domain.k(); ++i) os << ",y" << i + 1;
  for (int i = 0; i < rule.domain.m(); ++i) os << ",z" << i + 1;
  os << ",weight\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point& p = rule.nodes[i];
    os << p.x;
    for (double y : p.y) os << ',' << y;
    for (double z : p.z) os << ',' << z;
    os << ',' << rule.weights[i] << '\n';
  }
  os.precision(old);
}

BallRule make_ball_rule(const Coords& center, double radius, int radial, int angular) {
  if (!(radius > 0.0)) throw ParameterError("make_ball_rule: radius must be positive");
  if (radial < 1 || angular < 1) throw ParameterError("make_ball_rule: orders must be >= 1");
  const std::size_t d = center.size();
  BallRule rule;
  const GaussRule& gr = gauss_legendre(radial);
  auto emit = [&](const Coords& dir, double r, double w) {
    Coords p = center;
    for (std::size_t i = 0; i < d; ++i) p[i] += r * dir[i];
    rule.nodes.push_back(p);
    rule.weights.push_back(w);
  };
  if (d == 1) {
    for (int i = 0; i < radial; ++i) {
      const double s = 2.0 * gr.nodes[i] - 1.0;
      emit(Coords{1.0}, radius * s, 2.0 * radius * gr.weights[i]);
    }
  } else if (d == 2) {
    const double dphi = 2.0 * std::numbers::pi / angular;
    for (int i = 0; i < radial; ++i) {
      const double r = radius * gr.nodes[i];
      for (int j = 0; j < angular; ++j) {
        const double phi = (j + 0.5) * dphi;
        emit(Coords{std::cos(phi), std::sin(phi)}, r, radius * gr.weights[i] * r * dphi);
      }
    }
  } else if (d == 3) {
    const GaussRule& gc = gauss_legendre(angular);
    const double dphi = 2.0 * std::numbers::pi / angular;
    for (int i = 0; i < radial; ++i) {
      const double r = radius * gr.nodes[i];
      for (int a = 0; a < angular; ++a) {
        const double c = 2.0 * gc.nodes[a] - 1.0;
        const double s = std::sqrt(1.0 - c * c);
        for (int j = 0; j < angular; ++j) {
          const double phi = (j + 0.5) * dphi;
          emit(Coords{s * std::cos(phi), s * std::sin(phi), c}, r,
               radius * gr.weights[i] * r * r * 2.0 * gc.weights[a] * dphi);
        }
      }
    }
  } else {
    throw ParameterError("make_ball_rule: dimension " + std::to_string(d) + " not supported");
  }
  return rule;
}

double integrate_lifted(const LiftedDomain& lifted, const LiftedIntegrand& g, int order,
                        double grading) {
  const QuadratureRule base = make_rule(lifted.base, order, grading);
  if (lifted.n_prime == 0)
    return integrate(base, ScalarField([&g](const Point& p) { return g(p, Coords{}); }));
  const Coords origin(static_cast<std::size_t>(lifted.n_prime), 0.0);
  const BallRule section = make_ball_rule(origin, 1.0, order, order);
  const double s = lifted.s;
  const int np = lifted.n_prime;
  // Every (base node, z') pair with z' = x^s w, w in the unit n'-ball.
  return reduce_nodes(
      base,
      [&](std::size_t i) {
        const Point& pt = base.nodes[i];
        const double r = std::pow(pt.x, s);
        const double jac = std::pow(r, np);
        double acc = 0.0;
        for (std::size_t q = 0; q < section.nodes.size(); ++q) {
          Coords zp = section.nodes[q];
          for (double& c : zp) c *= r;
          acc += section.weights[q] * jac * g(pt, zp);
        }
        return acc;
      },
      "integrate_lifted");
}

}  // namespace cusplab
