#include "support.hpp"

#include "cusplab/cuspdiv.hpp"
#include "cusplab/errors.hpp"
#include "cusplab/report.hpp"
#include "cusplab/weights.hpp"

#include <doctest.h>

#include <algorithm>

#include "oracle_values.hpp"

using namespace cusplab;

namespace {

const CuspDomain kCusp(2.0, 1, 0);
const CuspDomain kRef(1.0, 1, 0);

ScalarField x_mean_zero(const CuspDomain& d, int order = 96) {
  return project_mean_zero(make_rule(d, order, 3.0), ScalarField([](const Point& p) { return p.x; }));
}

SolveParams quick(int order = 24) {
  SolveParams sp;
  sp.order = order;
  sp.rays = RayOrders{16, 16, 16};
  sp.probes = 6;
  return sp;
}

}  // namespace

TEST_CASE("pullback density") {
  const ScalarField f([](const Point& p) { return std::sin(p.x) + p.y[0]; });
  const ScalarField same = pullback_density(kRef, f);
  CHECK(same(Point(0.4, {0.1})) == f(Point(0.4, {0.1})));

  // alpha x^(alpha - 1) f(x^alpha) at gamma = 2
  const ScalarField g = pullback_density(kCusp, f);
  const double xh = 0.36;
  CHECK(g(Point(xh, {0.05})) == doctest::Approx(0.5 / std::sqrt(xh) * f(Point(0.6, {0.05}))).epsilon(1e-14));

  const ScalarField g1 = pullback_density(kCusp, constant_field(1.0));
  CHECK(testing::rel_err(integrate(make_rule(kRef, 64, 6.0), g1), oracle::area_gamma2) <= 1e-5);

  const ScalarField f0 = x_mean_zero(kCusp, 48);
  CHECK(std::abs(integrate(make_rule(kRef, 48, 6.0), pullback_density(kCusp, f0))) <= 1e-6);
}

TEST_CASE("pullback preserves mass for random smooth densities") {
  testing::Rng rng(31);
  const QuadratureRule omega = make_rule(kCusp, 48, 3.0);
  const QuadratureRule ref = make_rule(kRef, 48, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-2, 2), c = rng.uniform(-3, 3), w = rng.uniform(1, 6);
    const ScalarField f([=](const Point& p) { return a + b * p.x * p.x + c * p.y[0] + std::cos(w * p.x); });
    CHECK(std::abs(integrate(ref, pullback_density(kCusp, f)) - integrate(omega, f)) <= 1e-8);
  }
}

TEST_CASE("exponent bookkeeping identity") {
  testing::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double gamma = rng.uniform(1.0, 5.0);
    const double p = rng.uniform(1.01, 6.0);
    const double beta = rng.uniform(-4.0, 4.0);
    const double alpha = 1.0 / gamma;
    const double eta = beta + gamma - 1.0;
    const double lhs = alpha * p * eta + alpha - 1.0;
    const double rhs = p * beta_hat(beta, gamma, p);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("pipeline at the critical parameters") {
  SolveParams sp;  // defaults: N = 48, rays 24
  const ScalarField f = x_mean_zero(kCusp);
  const DivSolveResult r = solve_divergence_cusp(kCusp, f, -1.0, 0.0, 2.0, sp);
  const DivSolveReport& rep = r.report;
  MESSAGE("residual " << rep.residual_max << " ratio " << rep.ratio);
  CHECK(rep.residual_max <= 1e-2);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.ratio > 0.0);
  CHECK(rep.beta_hat == doctest::Approx(-0.25));
  CHECK(std::abs(rep.mean_of_f) <= 1e-12);
  CHECK(std::abs(rep.mean_of_g_hat) <= 1e-12);
  const double combined = std::sqrt(rep.norm_u_low * rep.norm_u_low + rep.norm_u_grad * rep.norm_u_grad);
  CHECK(rep.ratio == doctest::Approx(combined / rep.norm_f).epsilon(1e-14));
  // u is the Piola image of the reference field
  const Coords u = r.u(Point(0.6, {0.1}));
  CHECK(u.size() == 2);
}

TEST_CASE("larger eta only shrinks the weighted norms") {
  const ScalarField f = x_mean_zero(kCusp, 48);
  const DivSolveReport a = solve_divergence_cusp(kCusp, f, -1.0, 0.0, 2.0, quick()).report;
  const DivSolveReport b = solve_divergence_cusp(kCusp, f, -1.0, 0.5, 2.0, quick()).report;
  CHECK(b.residual_max == a.residual_max);
  CHECK(b.norm_u_grad <= a.norm_u_grad * std::pow(std::sqrt(2.0), 0.5) + 1e-14);
  CHECK(b.norm_f == a.norm_f);
}

TEST_CASE("reference-domain pipeline matches a direct Bogovskii solve") {
  const QuadratureRule rule = make_rule(kRef, 24, 3.0);
  const ScalarField f = project_mean_zero(rule, ScalarField([](const Point& p) { return std::cos(2.0 * p.x); }));
  const SolveParams sp = quick();
  const DivSolveReport rep = solve_divergence_cusp(kRef, f, 0.0, 0.0, 2.0, sp).report;
  const BogovskiiSolver direct(StarDomain::standard(1, 0), f, rule, sp.rays);
  const auto probes = interior_probes(kRef, sp.probes, sp.seed);
  const double r = div_residual(kRef, f, direct.field(), probes, sp.fd_step).max_rel;
  CHECK(rep.residual_max == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("pipeline parameter errors") {
  const ScalarField f = x_mean_zero(kCusp, 48);
  CHECK_THROWS_AS(solve_divergence_cusp(kCusp, f, 1.5, 2.0, 2.0, quick()), BetaOutOfRange);
  CHECK_THROWS_AS(solve_divergence_cusp(kCusp, f, -2.5, -1.5, 2.0, quick()), BetaOutOfRange);
  CHECK_THROWS_AS(solve_divergence_cusp(kCusp, f, -1.0, -0.5, 2.0, quick()), EtaTooSmall);
  CHECK_THROWS_AS(solve_divergence_cusp(kCusp, constant_field(1.0), -1.0, 0.0, 2.0, quick()), NotMeanZero);
  CHECK_THROWS_AS(solve_divergence_cusp(kCusp, f, -1.0, 0.0, 1.0, quick()), ParameterError);
  try {
    solve_divergence_cusp(kCusp, f, 1.5, 2.0, 2.0, quick());
  } catch (const BetaOutOfRange& e) {
    const std::string msg = e.what();
    CHECK(msg.find("-2.5") != std::string::npos);
    CHECK(msg.find("1.5") != std::string::npos);
  }
  try {
    solve_divergence_cusp(kCusp, f, -1.0, -0.5, 2.0, quick());
  } catch (const EtaTooSmall& e) {
    CHECK(std::string(e.what()).find("necessary") != std::string::npos);
  }
}

TEST_CASE("report serialisation") {
  DivSolveReport r;
  r.beta = -1.0;
  r.ratio = 0.1;
  r.order = 48;
  const std::string json = r.to_json();
  CHECK(json.front() == '{');
  CHECK(json.find("\"beta\": -1.0") != std::string::npos);
  CHECK(json.find("\"ratio\": 0.1") != std::string::npos);
  CHECK(json.find("\"order\": 48.0") != std::string::npos);
  CHECK(json.back() == '\n');
  const std::string header = DivSolveReport::csv_header();
  const std::string row = r.csv_row();
  CHECK(header.rfind("beta,eta,p,gamma", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(row.find('\n') == std::string::npos);
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("Hardy verifier examples") {
  const QuadratureRule rule = make_rule(kCusp, 128, 2.0);
  const ScalarField bump = bump_field(Point(0.6, {0.0}), 0.15);
  const HardyResult h = hardy_check(kCusp, bump, 0.0, 2.0, rule);
  CHECK(h.bound == 2.0);
  CHECK(h.lhs <= 2.0 * 1.05 * h.rhs);
  CHECK(h.lhs > 0.0);

  const ScalarField zero(
      [](const Point&) { return 0.0; }, [](const Point&) { return Coords{0.0, 0.0}; }, Support::compact);
  const HardyResult z = hardy_check(kCusp, zero, 0.0, 2.0, rule);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);

  CHECK_THROWS_AS(hardy_check(kCusp, bump, 0.5, 2.0, rule), DegenerateConstant);
  CHECK_THROWS_AS(hardy_check(kCusp, constant_field(1.0), 0.0, 2.0, rule), PreconditionError);
  // declared compact but not vanishing near the boundary
  const ScalarField liar([](const Point&) { return 1.0; }, {}, Support::compact);
  CHECK_THROWS_AS(hardy_check(kCusp, liar, 0.0, 2.0, rule), PreconditionError);
}

TEST_CASE("Hardy bound on a grid of exponents") {
  const QuadratureRule rule = make_rule(kCusp, 128, 2.0);
  const auto bumps = random_interior_bumps(kCusp, 4, 5);
  for (double kappa : {-1.0, -0.5, 0.0, 1.0})
    for (double p : {1.5, 2.0, 3.0}) {
      if (std::abs(p * kappa - p + 1.0) < 1e-12) continue;
      for (const auto& v : bumps) {
        const HardyResult h = hardy_check(kCusp, v, kappa, p, rule);
        CHECK(h.bound == doctest::Approx(p / std::abs(p * kappa - p + 1.0)));
        CHECK(h.lhs <= h.bound * h.rhs * 1.05);
      }
    }
}

TEST_CASE("interior bumps and near-boundary probes") {
  const auto bumps = random_interior_bumps(kCusp, 10, 1);
  CHECK(bumps.size() == 10);
  for (const auto& b : bumps) {
    CHECK(b.support == Support::compact);
    REQUIRE(b.has_gradient());
    const Point pt(0.7, {0.05});
    const Coords a = b.gradient(pt);
    const Coords n = fd_gradient(b, pt, 1e-4);
    CHECK(std::abs(a[0] - n[0]) <= 1e-6 * (1.0 + std::abs(a[0])));
    CHECK(std::abs(a[1] - n[1]) <= 1e-6 * (1.0 + std::abs(a[1])));
  }
  for (int m : {0, 1}) {
    const CuspDomain d(2.0, 1, m);
    const auto probes = near_boundary_probes(d, 100);
    CHECK(probes.size() == 100);
    for (const Point& p : probes) {
      CHECK(contains(d, p));
      CHECK(boundary_clearance(d, p) <= 2e-3);
    }
  }
}
