#include "support.hpp"

#include "cusplab/bogovskii.hpp"
#include "cusplab/cuspdiv.hpp"
#include "cusplab/errors.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cusplab;

namespace {

const CuspDomain kRef(1.0, 1, 0);

double bisect_edge(const BumpFunction& phi, const Coords& x, const Coords& y, double inside, double outside) {
  auto dist2 = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = y[i] + r * (x[i] - y[i]) - phi.center[i];
      s += c * c;
    }
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    (dist2(mid) <= phi.radius * phi.radius ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

/// f = div w for w = (b, -b / 2) with b a wide bump inside the reference domain,
/// so f has mean zero.
ScalarField divergence_of_bump() {
  const BumpFunction b = BumpFunction::make(Coords{0.65, 0.0}, 0.3);
  return ScalarField([b](const Point& p) {
    const Coords g = bump_gradient(b, p.coords());
    return g[0] - 0.5 * g[1];
  });
}

ScalarField smooth_mean_zero(const QuadratureRule& rule) {
  return project_mean_zero(rule, ScalarField([](const Point& p) {
    return std::cos(2.0 * p.x) + p.x * p.y[0];
  }));
}

}  // namespace

TEST_CASE("bump function") {
  const BumpFunction phi = BumpFunction::make(Coords{0.75, 0.0}, 0.125);
  CHECK(bump_eval(phi, Coords{0.75, 0.2}) == 0.0);
  CHECK(bump_eval(phi, Coords{0.75, 0.125}) == 0.0);
  CHECK(bump_eval(phi, Coords{0.75, 0.0}) == doctest::Approx(phi.normalization * std::exp(-1.0)).epsilon(1e-15));
  // dense product rule over the whole reference domain
  const QuadratureRule dense = make_rule(kRef, 768, 1.0);
  const double total = integrate(dense, ScalarField([&](const Point& p) { return bump_eval(phi, p); }));
  MESSAGE("bump mass on the reference domain: " << total - 1.0);
  CHECK(std::abs(total - 1.0) <= 1e-8);
  // and a polar rule on the ball itself
  const BallRule ball = make_ball_rule(phi.center, phi.radius, 96, 192);
  double on_ball = 0.0;
  for (std::size_t i = 0; i < ball.nodes.size(); ++i) on_ball += ball.weights[i] * bump_eval(phi, ball.nodes[i]);
  CHECK(std::abs(on_ball - 1.0) <= 1e-10);
  CHECK_THROWS_AS(BumpFunction::make(Coords{0.5, 0.0}, 0.0), ParameterError);

  const StarDomain star = StarDomain::standard(1, 1);
  CHECK(star.phi.center[0] == 0.75);
  CHECK(star.phi.center[1] == 0.0);
  CHECK(star.phi.center[2] == 0.5);
  CHECK(star.phi.radius == 0.125);
}

TEST_CASE("kernel r-interval") {
  const BumpFunction phi = BumpFunction::make(Coords{0.75, 0.0}, 0.125);
  const auto iv = kernel_r_interval(Coords{0.75 + 0.0625, 0.0}, Coords{0.75, 0.0}, phi);
  REQUIRE(iv.has_value());
  CHECK(iv->lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(iv->hi == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_FALSE(kernel_r_interval(Coords{0.3, 0.0}, Coords{0.5, 0.0}, phi).has_value());
  CHECK_THROWS_AS(kernel_r_interval(Coords{0.3, 0.0}, Coords{0.3, 0.0}, phi), SingularPointError);

  testing::Rng rng(17);
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    const Coords x{rng.uniform(0.1, 0.9), rng.uniform(-0.1, 0.1)};
    const Coords y{rng.uniform(0.1, 0.9), rng.uniform(-0.1, 0.1)};
    const auto r = kernel_r_interval(x, y, phi);
    if (!r) continue;
    ++hits;
    // each finite endpoint solves |y + r (x - y) - c| = rho
    const double mid = 0.5 * (r->lo + r->hi);
    if (r->lo > 1.0) CHECK(r->lo == doctest::Approx(bisect_edge(phi, x, y, mid, 1.0)).epsilon(1e-10));
    CHECK(r->hi == doctest::Approx(bisect_edge(phi, x, y, mid, r->hi + 10.0)).epsilon(1e-10));
  }
  CHECK(hits > 20);
}

TEST_CASE("kernel times |x - y|^{n-1} stays bounded") {
  const StarDomain star = StarDomain::standard(1, 0);
  const double bound = star.phi.normalization * std::exp(-1.0) * 2.0 * star.phi.radius * 2.0;
  testing::Rng rng(23);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Point xp = testing::random_interior(rng, kRef, 0.01, 0.99, 0.99);
    const Point yp = testing::random_interior(rng, kRef, 0.01, 0.99, 0.99);
    const Coords x = xp.coords();
    const Coords y = yp.coords();
    const Coords g = bogovskii_kernel(star.phi, x, y);
    const double d = std::hypot(x[0] - y[0], x[1] - y[1]);
    worst = std::max(worst, std::hypot(g[0], g[1]) * d);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst > 0.0);
  CHECK(worst <= bound);
}

TEST_CASE("product-rule evaluator: zero data, linearity and errors") {
  const StarDomain star = StarDomain::standard(1, 0);
  const QuadratureRule rule = make_rule(kRef, 24, 1.0);
  const Point x(0.5, {0.1});
  const Coords zero = bogovskii_eval(star, constant_field(0.0), x, rule);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  const ScalarField f1 = smooth_mean_zero(rule);
  const ScalarField f2 = project_mean_zero(rule, ScalarField([](const Point& p) { return p.y[0] * p.y[0]; }));
  const ScalarField sum([&](const Point& p) { return f1(p) + f2(p); });
  const Coords a = bogovskii_eval(star, f1, x, rule);
  const Coords b = bogovskii_eval(star, f2, x, rule);
  const Coords s = bogovskii_eval(star, sum, x, rule);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(s[j] - a[j] - b[j]) <= 1e-10 * (1.0 + std::abs(s[j])));

  CHECK_THROWS_AS(bogovskii_eval(star, constant_field(1.0), x, rule), NotMeanZero);
  CHECK_THROWS_AS(bogovskii_eval(star, f1, Point(0.5, {0.5}), rule), DomainError);
}

TEST_CASE("product-rule and polar evaluators agree on u") {
  const StarDomain star = StarDomain::standard(1, 0);
  const QuadratureRule rule = make_rule(kRef, 96, 1.0);
  const ScalarField f = smooth_mean_zero(rule);
  const BogovskiiSolver solver(star, f, rule, RayOrders{32, 32, 32});
  for (const Point& x : interior_probes(kRef, 5, 3)) {
    const Coords a = bogovskii_eval(star, f, x, rule);
    const Coords b = solver(x);
    const double scale = std::hypot(b[0], b[1]);
    CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) <= 5e-2 * scale);
  }
}

TEST_CASE("residual of an analytic field is at rounding level") {
  const ScalarField f([](const Point& p) { return 2.0 * p.x + 1.0; });
  VectorField u;
  u.value = [](const Point& p) { return Coords{p.x * p.x, p.y[0]}; };
  const auto probes = interior_probes(kRef, 20, 1);
  CHECK(div_residual(kRef, f, u, probes, 1e-3).max_rel <= 1e-9);

  VectorField zero;
  zero.value = [](const Point&) { return Coords{0.0, 0.0}; };
  CHECK(div_residual(kRef, constant_field(0.0), zero, probes, 1e-3).max_rel == 0.0);
}

TEST_CASE("polar solver: zero data and errors") {
  const StarDomain star = StarDomain::standard(1, 0);
  const QuadratureRule rule = make_rule(kRef, 16, 1.0);
  const BogovskiiSolver zero(star, constant_field(0.0), rule);
  const Coords u = zero(Point(0.4, {0.1}));
  CHECK(u[0] == 0.0);
  CHECK(u[1] == 0.0);
  CHECK_THROWS_AS(BogovskiiSolver(star, constant_field(1.0), rule), NotMeanZero);
  CHECK_THROWS_AS(BogovskiiSolver(star, constant_field(0.0), rule, RayOrders{1, 8, 8}), ParameterError);
  CHECK_THROWS_AS(zero(Point(1.2, {0.0})), DomainError);
}

TEST_CASE("polar solver inverts the divergence of a bump field") {
  const StarDomain star = StarDomain::standard(1, 0);
  // the mean check needs a rule that resolves the bump
  const QuadratureRule rule = make_rule(kRef, 256, 1.0);
  const ScalarField f = divergence_of_bump();
  const auto probes = interior_probes(kRef, 20, 7);
  BogovskiiSolver coarse(star, f, rule, RayOrders{48, 48, 48});
  const double r1 = div_residual(kRef, f, coarse.field(), probes, 2e-3).max_rel;
  BogovskiiSolver fine(star, f, rule, RayOrders{96, 96, 96});
  const double r2 = div_residual(kRef, f, fine.field(), probes, 1e-3).max_rel;
  MESSAGE("bump residuals " << r1 << " -> " << r2);
  CHECK(r1 <= 1e-2);
  CHECK(r2 < r1);
}

TEST_CASE("polar solver residual on smooth mean-zero data decreases under refinement") {
  const StarDomain star = StarDomain::standard(1, 0);
  const QuadratureRule rule = make_rule(kRef, 48, 2.0);
  const ScalarField f = smooth_mean_zero(rule);
  const auto probes = interior_probes(kRef, 20, 1);
  double prev = 1.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 12 << level;
    const BogovskiiSolver s(star, f, rule, RayOrders{n, n, n});
    const double r = div_residual(kRef, f, s.field(), probes, 4e-3 / (1 << level)).max_rel;
    if (level == 2) CHECK(r <= 1e-2);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("polar solver in three dimensions") {
  const CuspDomain ref3(1.0, 1, 1);
  const StarDomain star = StarDomain::standard(1, 1);
  const QuadratureRule rule = make_rule(ref3, 24, 2.0);
  const ScalarField f = project_mean_zero(rule, ScalarField([](const Point& p) {
    return p.x + 0.5 * p.z[0];
  }));
  const BogovskiiSolver s(star, f, rule, RayOrders{16, 16, 16});
  const auto probes = interior_probes(ref3, 6, 2);
  CHECK(div_residual(ref3, f, s.field(), probes, 2e-3).max_rel <= 1e-2);
}

TEST_CASE("weighted norm ratios stay bounded under refinement") {
  // The pipeline on the reference domain is the plain Bogovskii operator.
  const double beta = 0.3;
  const std::vector<ScalarField> family{
      ScalarField([](const Point& p) { return p.x; }),
      ScalarField([](const Point& p) { return std::cos(3.0 * p.x); }),
      ScalarField([](const Point& p) { return p.y[0] * (1.0 + p.x); }),
      ScalarField([](const Point& p) { return p.x * p.x - p.y[0]; }),
      ScalarField([](const Point& p) { return std::exp(-p.x) * (1.0 + p.y[0] * p.y[0]); }),
  };
  const QuadratureRule fine = make_rule(kRef, 48, 2.0);
  for (const ScalarField& raw : family) {
    const ScalarField f = project_mean_zero(fine, raw);
    double ratios[2];
    for (int level = 0; level < 2; ++level) {
      SolveParams sp;
      sp.order = 16 << level;
      sp.grading = 2.0;
      sp.rays = RayOrders{12 << level, 12 << level, 12 << level};
      sp.probes = 4;
      sp.mean_tol = 1e-5;
      ratios[level] = solve_divergence_cusp(kRef, f, beta, beta, 2.0, sp).report.ratio;
    }
    CHECK(std::isfinite(ratios[0]));
    CHECK(ratios[1] / ratios[0] <= 2.0);
    CHECK(ratios[1] / ratios[0] >= 0.5);
  }
}
