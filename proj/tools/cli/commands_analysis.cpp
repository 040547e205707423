// infsup, korn, counterexample, apcheck, lift-check.
#include "common.hpp"

#include "cusplab/analysis.hpp"
#include "cusplab/weights.hpp"

#include <algorithm>
#include <cmath>

namespace cusplab::cli {

namespace {

StudyParams study_params(const Json& cfg, const Json& block) {
  StudyParams sp;
  sp.levels = block.at("levels").get<int>();
  sp.eps0 = block.at("eps0").get<double>();
  sp.base_cross = block.at("base_cross").get<int>();
  sp.eig.seed = cfg.at("seed").get<std::uint64_t>();
  sp.eig.max_iter = block.at("max_iter").get<int>();
  if (sp.levels < 2) throw ConfigError("config key 'levels': a study needs at least 2 levels");
  return sp;
}

Table study_table(const ConstantStudy& s) {
  Table t{"", {"level", "cells", "eps_mesh", "constant"}, {}};
  for (const auto& l : s.levels)
    t.add({num(static_cast<long long>(l.level)), num(static_cast<long long>(l.cells)), num(l.eps_mesh),
           num(l.constant)});
  return t;
}

std::string trail(const ConstantStudy& s) {
  std::string t;
  for (const auto& l : s.levels) t += (t.empty() ? "" : ", ") + num(l.constant);
  return t;
}

void check_positive(Outcome& out, const ConstantStudy& s) {
  const bool ok = std::all_of(s.levels.begin(), s.levels.end(),
                              [](const LevelConstant& l) { return l.constant > 0.0; });
  out.check("constants_positive", ok, "constants " + trail(s));
}

}  // namespace

Outcome run_infsup(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("infsup");
  const std::string weight = c.at("weight").get<std::string>();
  double exponent = 0.0;
  if (weight == "theorem")
    exponent = 2.0 * (domain.gamma() - 1.0);
  else if (weight == "custom")
    exponent = c.at("weight_exponent").get<double>();
  else if (weight != "none")
    throw ConfigError("config key 'infsup.weight': expected theorem, none or custom, got '" + weight + "'");

  std::string expect = c.at("expect").get<std::string>();
  if (expect == "auto")
    expect = (domain.gamma() == 1.0 || exponent >= 2.0 * (domain.gamma() - 1.0)) ? "bounded" : "decreasing";
  if (expect != "bounded" && expect != "decreasing" && expect != "none")
    throw ConfigError("config key 'infsup.expect': expected auto, bounded, decreasing or none");

  const ConstantStudy s = inf_sup_study(domain, exponent, study_params(cfg, c));
  Outcome out;
  out.value("gamma", domain.gamma());
  out.value("weight_exponent", exponent);
  for (const auto& [key, v] : s.fields()) out.value(key, v);
  out.text("expect", expect);
  out.tables.push_back(study_table(s));
  check_positive(out, s);
  const double bounded = cfg.at("tolerances").at("bounded_ratio").get<double>();
  if (expect == "bounded")
    out.check("bounded_below", s.last_ratio() >= bounded,
              "last ratio " + num(s.last_ratio()) + " >= " + num(bounded));
  else if (expect == "decreasing")
    out.check("strictly_decreasing", s.strictly_decreasing(), "constants " + trail(s));
  return out;
}

Outcome run_korn(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("korn");
  const std::string variant = c.at("variant").get<std::string>();
  const double beta = c.at("beta").get<double>();
  KornWeights w;
  if (variant == "theorem") {
    if (beta < 0.0) throw ConfigError("config key 'korn.beta': the weighted Korn inequality needs beta >= 0");
    w = KornWeights::theorem(beta, domain.gamma());
  } else if (variant != "unweighted") {
    throw ConfigError("config key 'korn.variant': expected theorem or unweighted, got '" + variant + "'");
  }
  const Json& centre = c.at("ball_center");
  if (centre.size() != 2) throw ConfigError("config key 'korn.ball_center': expected two coordinates");
  const Ball2 ball{{centre[0].get<double>(), centre[1].get<double>()}, c.at("ball_radius").get<double>()};

  std::string expect = c.at("expect").get<std::string>();
  if (expect == "auto")
    expect = (variant == "unweighted" && domain.gamma() > 1.0) ? "increasing" : "bounded";
  if (expect != "bounded" && expect != "increasing" && expect != "none")
    throw ConfigError("config key 'korn.expect': expected auto, bounded, increasing or none");

  const ConstantStudy s = korn_study(domain, w, study_params(cfg, c), ball);
  Outcome out;
  out.value("gamma", domain.gamma());
  out.value("beta", beta);
  out.value("grad_exponent", w.grad_exponent);
  out.value("sym_exponent", w.sym_exponent);
  for (const auto& [key, v] : s.fields()) out.value(key, v);
  out.text("expect", expect);
  out.tables.push_back(study_table(s));
  check_positive(out, s);
  const double stab = cfg.at("tolerances").at("korn_stability").get<double>();
  if (expect == "bounded") {
    const double change = std::abs(s.last_ratio() - 1.0);
    out.check("stable", change < stab, "last-two-level change " + num(change) + " < " + num(stab));
  } else if (expect == "increasing") {
    out.check("strictly_increasing", s.strictly_increasing(), "constants " + trail(s));
  }
  return out;
}

Outcome run_counterexample(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("counterexample");
  CounterexampleParams cp;
  cp.order = c.at("N").get<int>();
  cp.grading = c.at("grading").get<double>();
  cp.seed = cfg.at("seed").get<std::uint64_t>();
  cp.bumps = c.at("bumps").get<int>();
  cp.truncations = c.at("truncations").get<std::vector<double>>();
  if (cp.truncations.size() < 2)
    throw ConfigError("config key 'counterexample.truncations': need at least two cut-offs");
  const CounterexampleReport r = counterexample_report(domain, cp);

  Outcome out;
  for (const auto& [key, v] : r.fields()) out.value(key, v);

  Table trunc{"truncated", {"eps", "integral_p_squared"}, {}};
  for (const auto& [eps, v] : r.truncated) trunc.add({num(eps), num(v)});
  Table weak{"weak_identity", {"bump", "lhs", "rhs", "rel"}, {}};
  for (std::size_t i = 0; i < r.weak.size(); ++i)
    weak.add({num(static_cast<long long>(i)), num(r.weak[i].lhs), num(r.weak[i].rhs), num(r.weak[i].rel)});
  Table lr{"lr_integrals", {"order", "integral_abs_p_r"}, {}};
  for (const auto& [order, v] : r.lr_integrals) lr.add({num(static_cast<long long>(order)), num(v)});
  out.tables.push_back(std::move(trunc));
  out.tables.push_back(std::move(weak));
  out.tables.push_back(std::move(lr));

  const Json& tol = cfg.at("tolerances");
  const double t_inv = tol.at("integral_inv_x2").get<double>();
  const double t_ce = tol.at("counterexample").get<double>();
  const double t_weak = tol.at("weak_identity").get<double>();
  const double exact = tol.at("exact").get<double>();
  const double growth = c.at("min_growth").get<double>();

  out.check("integral_inv_x2", std::abs(r.integral_inv_x2 - 2.0) <= t_inv,
            num(r.integral_inv_x2) + " vs 2 within " + num(t_inv));
  out.check("mean_constant", std::abs(r.c_star - 3.0) <= t_inv,
            "c* = " + num(r.c_star) + " vs 3 within " + num(t_inv) + " (mean with 6: " +
                num(r.mean_with_stated_constant) + ")");
  out.check("dx2_norm", std::abs(r.dx2_norm_sq - 8.0 / 3.0) <= t_ce,
            num(r.dx2_norm_sq) + " vs 8/3 within " + num(t_ce));
  out.check("weighted_norm", std::abs(r.weighted_norm_sq - 592.0 / 315.0) <= t_ce,
            num(r.weighted_norm_sq) + " vs 592/315 within " + num(t_ce));
  out.check("truncated_growth", r.truncated_growth >= growth,
            "last truncation ratio " + num(r.truncated_growth) + " >= " + num(growth));
  out.check("weak_identity", r.weak_max_rel <= t_weak,
            std::to_string(r.weak.size()) + " bumps, max rel " + num(r.weak_max_rel) + " <= " + num(t_weak));
  out.check("r0", std::abs(r.r0 - 1.2) <= exact, "r0 = " + num(r.r0));
  const bool lr_finite = std::all_of(r.lr_integrals.begin(), r.lr_integrals.end(),
                                     [](const auto& e) { return std::isfinite(e.second); });
  out.check("lr_finite", lr_finite && r.lr_rel_change <= t_ce,
            "integral of |p|^" + num(r.r) + " settles, rel change " + num(r.lr_rel_change) + " <= " +
                num(t_ce));
  return out;
}

Outcome run_apcheck(const Json& cfg) {
  const Json& c = cfg.at("apcheck");
  const double lo = c.at("mu_min").get<double>();
  const double hi = c.at("mu_max").get<double>();
  const int steps = c.at("mu_steps").get<int>();
  if (steps < 2) throw ConfigError("config key 'apcheck.mu_steps': must be >= 2");

  Outcome out;
  Table table{"", {"mu", "p", "n", "m", "in_ap", "expected"}, {}};
  long long points = 0;
  long long mismatches = 0;
  long long endpoint_hits = 0;
  auto record = [&](double mu, double p, int n, int m, bool endpoint) {
    const bool got = is_muckenhoupt_ap(mu, p, n, m);
    const double d = n - m;
    const bool expected = mu > -d && mu < d * (p - 1.0);
    ++points;
    if (got != expected) ++mismatches;
    if (endpoint && got) ++endpoint_hits;
    table.add({num(mu), num(p), num(static_cast<long long>(n)), num(static_cast<long long>(m)),
               got ? "1" : "0", expected ? "1" : "0"});
  };
  for (const Json& pj : c.at("p")) {
    for (const Json& nj : c.at("n")) {
      for (const Json& mj : c.at("m")) {
        const double p = pj.get<double>();
        const int n = nj.get<int>();
        const int m = mj.get<int>();
        if (m >= n) continue;
        for (int i = 0; i < steps; ++i) record(lo + (hi - lo) * i / (steps - 1), p, n, m, false);
        const OpenInterval iv = ap_exponent_range(p, n, m);
        record(iv.lo, p, n, m, true);
        record(iv.hi, p, n, m, true);
      }
    }
  }
  out.tables.push_back(std::move(table));
  out.value("points", static_cast<double>(points));
  out.value("mismatches", static_cast<double>(mismatches));
  out.value("endpoint_hits", static_cast<double>(endpoint_hits));
  out.check("classifier_exact", mismatches == 0,
            std::to_string(mismatches) + " mismatches over " + std::to_string(points) + " points");
  out.check("endpoints_excluded", endpoint_hits == 0,
            std::to_string(endpoint_hits) + " endpoints classified inside");
  return out;
}

Outcome run_lift_check(const Json& cfg) {
  const CuspDomain domain = domain_of(cfg);
  const Json& c = cfg.at("lift_check");
  const double p = c.at("p").get<double>();
  const int N = c.at("N").get<int>();
  const double grading = c.at("grading").get<double>();
  const double tol = cfg.at("tolerances").at("lifted").get<double>();

  auto y0 = [](const Point& pt) { return pt.y.empty() ? 0.0 : pt.y[0]; };
  const std::vector<std::pair<std::string, ScalarField>> integrands{
      {"one", constant_field(1.0)},
      {"x", ScalarField([](const Point& pt) { return pt.x; })},
      {"x_pow_minus_half", ScalarField([](const Point& pt) { return 1.0 / std::sqrt(pt.x); })},
      {"cos3x_1_plus_y", ScalarField([y0](const Point& pt) { return std::cos(3.0 * pt.x) * (1.0 + y0(pt)); })},
      {"exp_x_y2", ScalarField([y0](const Point& pt) { return std::exp(pt.x) * y0(pt) * y0(pt); })},
  };

  Outcome out;
  Table table{"", {"n_prime", "s", "integrand", "lhs", "rhs", "rel"}, {}};
  int case_index = 0;
  for (const Json& nj : c.at("n_prime")) {
    for (const Json& sj : c.at("s")) {
      const int n_prime = nj.get<int>();
      const double s = sj.get<double>();
      double worst = 0.0;
      for (const auto& [name, g] : integrands) {
        const LiftedIdentity li = lifted_korn_transfer_check(domain, n_prime, s, g, p, N, grading);
        const double rel = std::abs(li.lhs - li.rhs) / std::max(std::abs(li.rhs), 1e-300);
        worst = std::max(worst, rel);
        if (!std::isfinite(li.lhs) || !std::isfinite(li.rhs)) out.non_finite = true;
        table.add({num(static_cast<long long>(n_prime)), num(s), name, num(li.lhs), num(li.rhs), num(rel)});
      }
      const std::string key = "case_" + std::to_string(case_index++) + "_";
      out.value(key + "n_prime", n_prime);
      out.value(key + "s", s);
      out.value(key + "max_rel", worst);
      out.check("lifted_n" + std::to_string(n_prime) + "_s_" + num(s), worst <= tol,
                std::to_string(integrands.size()) + " integrands, max rel " + num(worst) + " <= " + num(tol));
    }
  }
  out.tables.push_back(std::move(table));
  return out;
}

}  // namespace cusplab::cli
