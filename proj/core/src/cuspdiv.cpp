#include "cusplab/cuspdiv.hpp"

#include "cusplab/errors.hpp"
#include "cusplab/parallel.hpp"
#include "cusplab/weights.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cusplab {

ScalarField pullback_density(const CuspDomain& domain, const ScalarField& f) {
  const double a = domain.alpha();
  if (domain.is_reference()) return f;
  return ScalarField(
      [a, f](const Point& hat) {
        Point pt = hat;
        pt.x = std::pow(hat.x, a);
        return a * (pt.x / hat.x) * f(pt);
      },
      {}, f.support);
}

ReportFields DivSolveReport::fields() const {
  return {{"beta", beta},
          {"eta", eta},
          {"p", p},
          {"gamma", gamma},
          {"beta_hat", beta_hat},
          {"mean_of_f", mean_of_f},
          {"mean_of_g_hat", mean_of_g_hat},
          {"residual_max", residual_max},
          {"norm_f", norm_f},
          {"norm_u_low", norm_u_low},
          {"norm_u_grad", norm_u_grad},
          {"ratio", ratio},
          {"order", static_cast<double>(order)},
          {"grading", grading},
          {"ray_angular", static_cast<double>(ray_angular)},
          {"ray_radial", static_cast<double>(ray_radial)},
          {"ray_chord", static_cast<double>(ray_chord)},
          {"probes", probes}};
}

std::string DivSolveReport::to_json() const {
  return fields_to_json(fields());
}

std::string DivSolveReport::csv_header() {
  std::string out;
  for (const auto& [k, v] : DivSolveReport{}.fields()) {
    if (!out.empty()) out += ',';
    out += k;
  }
  return out;
}

std::string DivSolveReport::csv_row() const {
  std::string out;
  for (const auto& [k, v] : fields()) {
    if (!out.empty()) out += ',';
    out += format_double(v);
  }
  return out;
}

DivSolveResult solve_divergence_cusp(const CuspDomain& domain, const ScalarField& f, double beta,
                                     double eta, double p, const SolveParams& params) {
  if (!(p > 1.0)) throw ParameterError("solve_divergence_cusp: p must exceed 1");
  const double g = domain.gamma();
  const int n = domain.n();
  const int m = domain.m();
  const OpenInterval iv = admissible_beta_interval(g, p, n, m);
  if (!iv.contains(beta)) {
    std::ostringstream os;
    os << "beta = " << beta << " is not in the admissible open interval (" << iv.lo << ", " << iv.hi
       << ") for gamma=" << g << ", p=" << p << ", n=" << n << ", m=" << m;
    throw BetaOutOfRange(os.str());
  }
  const double eta_min = beta + g - 1.0;
  if (eta < eta_min - 1e-14) {
    std::ostringstream os;
    os << "eta = " << eta << " < beta + gamma - 1 = " << eta_min
       << "; the estimate fails for smaller eta, this condition is also necessary";
    throw EtaTooSmall(os.str());
  }
  const double bh = beta_hat(beta, g, p);
  if (!is_muckenhoupt_ap(p * bh, p, n, m)) {
    std::ostringstream os;
    os << "internal: admissible beta = " << beta << " gave p*beta_hat = " << p * bh
       << " outside the A_p range";
    throw ApViolation(os.str());
  }

  const QuadratureRule rule = make_rule(domain, params.order, params.grading);
  const double mean_f = integrate(rule, f);
  const double abs_f = weighted_lp_norm(rule, f, 1.0);
  if (std::abs(mean_f) > params.mean_tol * abs_f) {
    std::ostringstream os;
    os << "f is not mean-zero: integral " << mean_f << " exceeds " << params.mean_tol
       << " * ||f||_1 = " << params.mean_tol * abs_f;
    throw NotMeanZero(os.str());
  }

  // With grading q * gamma the reference nodes are exactly the preimages of
  // the Omega nodes, so the mean of g^ reproduces the mean of f.
  const CuspDomain ref = domain.reference();
  const QuadratureRule ref_rule = make_rule(ref, params.order, params.grading * g);
  const ScalarField g_hat = pullback_density(domain, f);
  BogovskiiSolver solver(StarDomain::standard(ref.k(), ref.m()), g_hat, ref_rule, params.rays,
                         params.mean_tol);

  VectorField v_hat = solver.field();
  VectorField u = piola_pushforward(domain, v_hat);

  const auto probes = interior_probes(domain, params.probes, params.seed);
  const ResidualReport res = div_residual(domain, f, u, probes, params.fd_step);

  // Norms: one pass over the Omega rule, v^ and its Jacobian evaluated once per node.
  const std::size_t count = rule.size();
  std::vector<double> f_part(count), low_part(count), grad_part(count);
  parallel_for(count, [&](std::size_t i) {
    const Point& pt = rule.nodes[i];
    const double d = rule.dist[i];
    f_part[i] = std::pow(std::abs(f(pt)), p) * std::pow(d, p * beta);
    double lo = 0.0;
    for (double c : u.value(pt)) lo += std::pow(std::abs(c), p);
    double gr = 0.0;
    for (const Coords& row : u.jacobian(pt))
      for (double c : row) gr += std::pow(std::abs(c), p);
    low_part[i] = lo * std::pow(d, p * (eta - 1.0));
    grad_part[i] = gr * std::pow(d, p * eta);
    if (!std::isfinite(f_part[i]) || !std::isfinite(low_part[i]) || !std::isfinite(grad_part[i]))
      throw EvaluationError("solve_divergence_cusp: non-finite norm integrand at " + pt.to_string());
  });
  double sf = 0.0, sl = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sf += rule.weights[i] * f_part[i];
    sl += rule.weights[i] * low_part[i];
    sg += rule.weights[i] * grad_part[i];
  }

  DivSolveReport rep;
  rep.beta = beta;
  rep.eta = eta;
  rep.p = p;
  rep.gamma = g;
  rep.beta_hat = bh;
  rep.mean_of_f = mean_f;
  rep.mean_of_g_hat = solver.measured_mean();
  rep.residual_max = res.max_rel;
  rep.norm_f = std::pow(sf, 1.0 / p);
  rep.norm_u_low = std::pow(sl, 1.0 / p);
  rep.norm_u_grad = std::pow(sg, 1.0 / p);
  rep.ratio = rep.norm_f > 0.0 ? std::pow(sl + sg, 1.0 / p) / rep.norm_f : 0.0;
  rep.order = params.order;
  rep.grading = params.grading;
  rep.ray_angular = params.rays.angular;
  rep.ray_radial = params.rays.radial;
  rep.ray_chord = params.rays.chord;
  rep.probes = static_cast<double>(params.probes);
  return {std::move(u), rep};
}

ScalarField bump_field(const Point& center, double radius) {
  const BumpFunction phi = BumpFunction::make(center.coords(), radius);
  return ScalarField([phi](const Point& pt) { return bump_eval(phi, pt); },
                     [phi](const Point& pt) { return bump_gradient(phi, pt.coords()); }, Support::compact);
}

std::vector<ScalarField> random_interior_bumps(const CuspDomain& domain, std::size_t count,
                                               std::uint64_t seed) {
  std::vector<ScalarField> out;
  out.reserve(count);
  for (const Point& c : interior_probes(domain, count, seed, 0.3, 0.9, 0.3))
    out.push_back(bump_field(c, 0.6 * boundary_clearance(domain, c)));
  return out;
}

std::vector<Point> near_boundary_probes(const CuspDomain& domain, std::size_t count) {
  const double g = domain.gamma();
  const int k = domain.k();
  const int m = domain.m();
  std::vector<Point> out;
  out.reserve(count);
  const double layer = 1e-3;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    Point pt;
    pt.y.assign(k, 0.0);
    pt.z.assign(m, 0.5);
    switch (i % 4) {
      case 0: {  // lateral boundary |y| = x^gamma
        pt.x = 0.05 + 0.9 * t;
        const double r = (1.0 - layer) * std::pow(pt.x, g);
        const double ang = 2.0 * std::numbers::pi * t * 7.0;
        pt.y[0] = k == 1 ? (i % 8 == 0 ? r : -r) : r * std::cos(ang);
        if (k >= 2) pt.y[1] = r * std::sin(ang);
        break;
      }
      case 1:  // end face x = 1
        pt.x = 1.0 - layer;
        pt.y[0] = (2.0 * t - 1.0) * 0.9 * std::pow(pt.x, g) / std::sqrt(static_cast<double>(k));
        break;
      case 2:  // tip
        pt.x = layer * (0.5 + t);
        break;
      default:  // z faces, or another tip point when m = 0
        pt.x = 0.1 + 0.8 * t;
        if (m > 0)
          pt.z[i % m] = (i % 8 == 3) ? layer : 1.0 - layer;
        else
          pt.x = layer * (1.0 + t);
        break;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

HardyResult hardy_check(const CuspDomain& domain, const ScalarField& v, double kappa, double p,
                        const QuadratureRule& rule) {
  if (!(p > 1.0)) throw ParameterError("hardy_check: p must exceed 1");
  const double denom = p * kappa - p + 1.0;
  if (std::abs(denom) < 1e-12) {
    std::ostringstream os;
    os << "hardy_check: p*kappa - p + 1 = 0 for kappa=" << kappa << ", p=" << p
       << "; the Hardy constant is undefined";
    throw DegenerateConstant(os.str());
  }
  if (v.support != Support::compact)
    throw PreconditionError("hardy_check: v must declare compact support in the domain");
  double scale = 0.0;
  for (std::size_t i = 0; i < rule.size(); i += 7) scale = std::max(scale, std::abs(v(rule.nodes[i])));
  for (const Point& pt : near_boundary_probes(domain, 100)) {
    const double val = v(pt);
    if (std::abs(val) > 1e-12 * std::max(1.0, scale))
      throw PreconditionError("hardy_check: v declared compactly supported but v(" + pt.to_string() +
                              ") = " + format_double(val));
  }

  const std::size_t count = rule.size();
  std::vector<double> lp(count), rp(count);
  parallel_for(count, [&](std::size_t i) {
    const Point& pt = rule.nodes[i];
    const double w = std::pow(pt.x, p * kappa);
    const double dvdx = v.has_gradient() ? v.gradient(pt)[0] : fd_gradient(v, pt, 1e-4)[0];
    lp[i] = std::pow(std::abs(v(pt) / pt.x), p) * w;
    rp[i] = std::pow(std::abs(dvdx), p) * w;
  });
  double sl = 0.0, sr = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sl += rule.weights[i] * lp[i];
    sr += rule.weights[i] * rp[i];
  }
  return {std::pow(sl, 1.0 / p), std::pow(sr, 1.0 / p), p / std::abs(denom)};
}

}  // namespace cusplab
