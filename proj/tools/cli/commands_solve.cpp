// divsolve, hardy, scan-beta: the quadrature-level experiments.
#include "common.hpp"

#include "cusplab/cuspdiv.hpp"
#include "cusplab/errors.hpp"
#include "cusplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace cusplab::cli {

namespace {

ScalarField density_from_name(const std::string& name) {
  if (name == "x") return ScalarField([](const Point& pt) { return pt.x; });
  if (name == "x2") return ScalarField([](const Point& pt) { return pt.x * pt.x; });
  if (name == "cos3x") return ScalarField([](const Point& pt) { return std::cos(3.0 * pt.x); });
  if (name == "xy")
    return ScalarField([](const Point& pt) { return pt.x * (1.0 + (pt.y.empty() ? 0.0 : pt.y[0])); });
  throw ConfigError("config key 'divsolve.density': unknown density '" + name +
                    "' (expected x, x2, cos3x or xy)");
}

}  // namespace

Outcome run_divsolve(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("divsolve");
  const int N = cfg.at("quadrature").at("N").get<int>();
  const double grading = cfg.at("quadrature").at("grading").get<double>();
  const int levels = c.at("levels").get<int>();
  if (levels < 1) throw ConfigError("config key 'divsolve.levels': must be >= 1");
  const double beta = c.at("beta").get<double>();
  const double eta = c.at("eta").get<double>();
  const double p = c.at("p").get<double>();
  const Json& tol = cfg.at("tolerances");

  // Project on the finest rule so every level sees the same mean-zero density.
  const QuadratureRule fine = make_rule(domain, N << (levels - 1), grading);
  const ScalarField f = project_mean_zero(fine, density_from_name(c.at("density").get<std::string>()));

  Outcome out;
  Table table{"", {"level", "order", "ray_order", "fd_step", "residual_max", "ratio", "norm_f",
                   "norm_u_low", "norm_u_grad"}, {}};
  std::vector<DivSolveReport> reports;
  for (int level = 0; level < levels; ++level) {
    SolveParams sp;
    sp.order = N << level;
    sp.grading = grading;
    const int rays = c.at("ray_order").get<int>() << level;
    sp.rays = RayOrders{rays, rays, rays};
    sp.probes = c.at("probes").get<std::size_t>();
    sp.seed = cfg.at("seed").get<std::uint64_t>();
    sp.fd_step = c.at("fd_step").get<double>() / std::ldexp(1.0, level);
    sp.mean_tol = tol.at("quadrature").get<double>();
    const DivSolveReport r = solve_divergence_cusp(domain, f, beta, eta, p, sp).report;
    reports.push_back(r);
    table.add({num(static_cast<long long>(level)), num(static_cast<long long>(sp.order)),
               num(static_cast<long long>(rays)), num(sp.fd_step), num(r.residual_max), num(r.ratio),
               num(r.norm_f), num(r.norm_u_low), num(r.norm_u_grad)});
  }
  out.tables.push_back(std::move(table));

  for (const auto& [key, v] : reports.front().fields()) out.value(key, v);
  for (std::size_t l = 0; l < reports.size(); ++l) {
    out.value("residual_max_level_" + std::to_string(l), reports[l].residual_max);
    out.value("ratio_level_" + std::to_string(l), reports[l].ratio);
  }

  const double res_tol = tol.at("residual").get<double>();
  out.check("residual", reports.front().residual_max <= res_tol,
            "max relative residual " + num(reports.front().residual_max) + " <= " + num(res_tol));
  const bool finite = std::all_of(reports.begin(), reports.end(), [](const DivSolveReport& r) {
    return std::isfinite(r.ratio) && r.ratio > 0.0;
  });
  out.check("ratio_finite", finite, "ratio " + num(reports.front().ratio));
  if (reports.size() >= 2) {
    const double a = reports[reports.size() - 2].ratio;
    const double b = reports.back().ratio;
    const double change = std::abs(b - a) / std::abs(a);
    const double stab = tol.at("ratio_stability").get<double>();
    out.value("ratio_change", change);
    out.check("ratio_stable", change < stab, "relative change " + num(change) + " < " + num(stab));
    bool decreasing = true;
    for (std::size_t l = 1; l < reports.size(); ++l)
      decreasing = decreasing && reports[l].residual_max < reports[l - 1].residual_max;
    std::string trail;
    for (const auto& r : reports) trail += (trail.empty() ? "" : " -> ") + num(r.residual_max);
    out.check("residual_decreasing", decreasing, "residual " + trail);
  }

  // alpha p eta + alpha - 1 = p beta_hat at eta = beta + gamma - 1.
  const int draws = c.at("identity_draws").get<int>();
  std::mt19937_64 rng(cfg.at("seed").get<std::uint64_t>());
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = 1.0 + 3.0 * unit();
    const double pp = 1.1 + 3.9 * unit();
    const OpenInterval iv = admissible_beta_interval(g, pp, domain.n(), domain.m());
    const double b = iv.lo + (iv.hi - iv.lo) * (0.01 + 0.98 * unit());
    const double a = 1.0 / g;
    const double lhs = a * pp * (b + g - 1.0) + a - 1.0;
    const double rhs = pp * beta_hat(b, g, pp);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  const double exact = tol.at("exact").get<double>();
  out.value("exponent_identity_max_error", worst);
  out.check("exponent_identity", worst <= exact,
            std::to_string(draws) + " draws, max error " + num(worst) + " <= " + num(exact));
  return out;
}

Outcome run_hardy(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("hardy");
  const QuadratureRule rule = make_rule(domain, c.at("N").get<int>(), c.at("grading").get<double>());
  const auto bumps = random_interior_bumps(domain, c.at("bumps").get<std::size_t>(),
                                           cfg.at("seed").get<std::uint64_t>());
  const double slack = cfg.at("tolerances").at("hardy_slack").get<double>();

  Outcome out;
  Table table{"", {"kappa", "p", "bump", "lhs", "rhs", "bound", "lhs_over_rhs", "status"}, {}};
  int case_index = 0;
  for (const Json& kj : c.at("kappa")) {
    for (const Json& pj : c.at("p")) {
      const double kappa = kj.get<double>();
      const double p = pj.get<double>();
      const std::string key = "case_" + std::to_string(case_index++) + "_";
      out.value(key + "kappa", kappa);
      out.value(key + "p", p);
      const std::string name = "hardy_kappa_" + num(kappa) + "_p_" + num(p);
      try {
        double worst = 0.0;
        double bound = 0.0;
        bool ok = true;
        for (std::size_t b = 0; b < bumps.size(); ++b) {
          const HardyResult h = hardy_check(domain, bumps[b], kappa, p, rule);
          if (!std::isfinite(h.lhs) || !std::isfinite(h.rhs)) out.non_finite = true;
          bound = h.bound;
          const double q = h.lhs / h.rhs;
          worst = std::max(worst, q);
          ok = ok && h.lhs <= h.bound * h.rhs * (1.0 + slack);
          table.add({num(kappa), num(p), num(static_cast<long long>(b)), num(h.lhs), num(h.rhs),
                     num(h.bound), num(q), "ok"});
        }
        out.value(key + "bound", bound);
        out.value(key + "max_ratio", worst);
        out.value(key + "degenerate", 0.0);
        out.check(name, ok, "max lhs/rhs " + num(worst) + " <= " + num(bound) + " x " + num(1.0 + slack));
      } catch (const DegenerateConstant&) {
        // Infinite constant: the inequality holds vacuously.
        out.value(key + "degenerate", 1.0);
        table.add({num(kappa), num(p), "", "", "", "", "", "DegenerateConstant"});
        out.check(name, true, "p kappa - p + 1 = 0, constant infinite (vacuous)");
      }
    }
  }
  out.tables.push_back(std::move(table));
  return out;
}

Outcome run_scan_beta(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("scan_beta");
  const double p = c.at("p").get<double>();
  const int N = c.at("N").get<int>();
  const int points = c.at("points").get<int>();
  const double delta = c.at("delta").get<double>();
  if (points < 2) throw ConfigError("config key 'scan_beta.points': must be >= 2");
  const OpenInterval iv = admissible_beta_interval(domain.gamma(), p, domain.n(), domain.m());
  if (!(iv.hi - iv.lo > 2.0 * delta))
    throw ConfigError("config key 'scan_beta.delta': interval (" + num(iv.lo) + ", " + num(iv.hi) +
                      ") is too short");

  SolveParams sp;
  sp.order = N;
  sp.grading = cfg.at("quadrature").at("grading").get<double>();
  const int rays = c.at("ray_order").get<int>();
  sp.rays = RayOrders{rays, rays, rays};
  sp.seed = cfg.at("seed").get<std::uint64_t>();
  sp.fd_step = cfg.at("divsolve").at("fd_step").get<double>();
  sp.probes = cfg.at("divsolve").at("probes").get<std::size_t>();

  // x^6 (x - c) keeps every weighted norm finite near the lower endpoint.
  const QuadratureRule rule = make_rule(domain, N, sp.grading);
  const double c6 = integrate(rule, ScalarField([](const Point& pt) { return std::pow(pt.x, 6); }));
  const double c7 = integrate(rule, ScalarField([](const Point& pt) { return std::pow(pt.x, 7); }));
  const double shift = c7 / c6;
  const ScalarField f([shift](const Point& pt) { return std::pow(pt.x, 6) * (pt.x - shift); });

  Outcome out;
  out.value("beta_lo", iv.lo);
  out.value("beta_hi", iv.hi);
  out.value("density_shift", shift);
  Table table{"", {"beta", "eta", "status", "ratio", "residual_max"}, {}};

  // Empty when the solver rejected beta.
  auto attempt = [&](double beta) -> std::optional<double> {
    const double eta = beta + domain.gamma() - 1.0;
    try {
      const DivSolveReport r = solve_divergence_cusp(domain, f, beta, eta, p, sp).report;
      table.add({num(beta), num(eta), "ok", num(r.ratio), num(r.residual_max)});
      return r.ratio;
    } catch (const BetaOutOfRange&) {
      table.add({num(beta), num(eta), "BetaOutOfRange", "", ""});
      return std::nullopt;
    }
  };

  const bool lo_rejected = !attempt(iv.lo).has_value();
  bool inside_ok = true;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double beta = iv.lo + delta + (iv.hi - iv.lo - 2.0 * delta) * i / (points - 1);
    const auto ratio = attempt(beta);
    const bool ok = ratio && std::isfinite(*ratio) && *ratio > 0.0;
    inside_ok = inside_ok && ok;
    if (ok) worst = std::max(worst, *ratio);
    out.value("beta_" + std::to_string(i), beta);
    out.value("ratio_" + std::to_string(i), ok ? *ratio : 0.0);
  }
  const bool endpoints = lo_rejected && !attempt(iv.hi).has_value();
  out.value("max_ratio", worst);
  out.tables.push_back(std::move(table));
  out.check("inside_ratios_finite", inside_ok, std::to_string(points) + " interior betas, max ratio " + num(worst));
  out.check("endpoints_rejected", endpoints, "BetaOutOfRange at beta = " + num(iv.lo) + " and " + num(iv.hi));
  return out;
}

}  // namespace cusplab::cli
