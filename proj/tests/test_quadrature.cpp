#include "support.hpp"

#include "cusplab/errors.hpp"
#include "cusplab/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "oracle_values.hpp"

using namespace cusplab;

namespace {
const CuspDomain kCusp(2.0, 1, 0);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {2, 5, 16, 48}) {
    const GaussRule& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], 2 * n - 1);
    CHECK(s == doctest::Approx(1.0 / (2 * n)).epsilon(1e-13));
  }
}

TEST_CASE("rule construction") {
  const QuadratureRule r = make_rule(kCusp, 64, 3.0);
  double area = 0.0;
  for (double w : r.weights) {
    CHECK(w > 0.0);
    area += w;
  }
  CHECK(testing::rel_err(area, oracle::area_gamma2) <= 1e-6);
  for (const Point& p : r.nodes) CHECK(contains(kCusp, p));
  CHECK(r.nodes.size() == 64u * 64u);

  double ref_area = 0.0;
  for (double w : make_rule(CuspDomain(1.0, 1, 0), 64, 1.0).weights) ref_area += w;
  CHECK(testing::rel_err(ref_area, oracle::area_gamma1) <= 1e-12);

  CHECK(make_rule(CuspDomain(2.0, 1, 1), 8, 2.0).nodes.size() == 8u * 8u * 8u);
  CHECK_THROWS_AS(make_rule(kCusp, 1, 3.0), ParameterError);
  CHECK_THROWS_AS(make_rule(kCusp, 8, 0.5), ParameterError);
  CHECK_THROWS_AS(make_rule(CuspDomain(2.0, 3, 0), 8, 2.0), ParameterError);
}

TEST_CASE("oracle integrals on the gamma = 2 profile") {
  const QuadratureRule r = make_rule(kCusp, 64, 3.0);
  CHECK(testing::rel_err(integrate(r, constant_field(1.0)), oracle::area_gamma2) <= 1e-6);
  CHECK(testing::rel_err(integrate(r, ScalarField([](const Point& p) { return 1.0 / (p.x * p.x); })),
                         oracle::integral_inv_x2) <= 1e-3);
  CHECK(testing::rel_err(integrate(r, constant_field(1.0), 2.0), oracle::integral_d2) <= 1e-5);
}

TEST_CASE("disc cross-sections") {
  // |Omega| = int_0^1 pi x^{2 gamma} dx for k = 2
  const QuadratureRule r = make_rule(CuspDomain(2.0, 2, 0), 32, 2.0);
  double area = 0.0;
  for (double w : r.weights) area += w;
  CHECK(testing::rel_err(area, std::numbers::pi / 5.0) <= 1e-10);
}

TEST_CASE("weighted Lp norms") {
  const QuadratureRule r = make_rule(kCusp, 48, 3.0);
  CHECK(testing::rel_err(weighted_lp_norm(r, constant_field(1.0), 2.0), std::sqrt(oracle::area_gamma2)) <= 1e-6);
  CHECK(weighted_lp_norm(r, constant_field(0.0), 2.0) == 0.0);
  const ScalarField f([](const Point& p) { return std::sin(5.0 * p.x) + p.y[0]; });
  const ScalarField g([&f](const Point& p) { return -3.0 * f(p); });
  CHECK(weighted_lp_norm(r, g, 3.0, -1.0) == doctest::Approx(3.0 * weighted_lp_norm(r, f, 3.0, -1.0)).epsilon(1e-13));
}

TEST_CASE("Holder consistency of weighted norms") {
  const QuadratureRule r = make_rule(kCusp, 32, 3.0);
  const ScalarField f([](const Point& p) { return std::cos(4.0 * p.x) + 2.0 * p.y[0]; });
  for (double p : {1.5, 2.0, 3.0})
    for (double beta : {-1.0, -0.25, 0.5}) {
      const ScalarField fw([&](const Point& pt) {
        return f(pt) * std::pow(dist_to_cusp(kCusp, pt), beta);
      });
      CHECK(weighted_lp_norm(r, f, p, p * beta) == doctest::Approx(weighted_lp_norm(r, fw, p)).epsilon(1e-12));
    }
}

TEST_CASE("mean-zero projection") {
  const QuadratureRule r = make_rule(kCusp, 64, 3.0);
  const ScalarField c = project_mean_zero(r, constant_field(4.2));
  CHECK(std::abs(c(Point(0.3, {0.01}))) <= 1e-13);

  const ScalarField inv([](const Point& p) { return 1.0 / (p.x * p.x); });
  CHECK(testing::rel_err(weighted_mean(r, inv), oracle::mean_inv_x2) <= 1e-3);
  const ScalarField pz = project_mean_zero(r, inv);
  const Point probe(0.5, {0.1});
  CHECK(pz(probe) == doctest::Approx(inv(probe) - weighted_mean(r, inv)).epsilon(1e-14));

  const ScalarField f([](const Point& p) { return std::exp(p.x) * (1.0 + p.y[0]); });
  for (double w : {0.0, 2.0, -1.0}) {
    const ScalarField once = project_mean_zero(r, f, w);
    const ScalarField twice = project_mean_zero(r, once, w);
    CHECK(std::abs(integrate(r, once, w)) <= 1e-14 * integrate(r, f, w));
    CHECK(std::abs(twice(probe) - once(probe)) <= 1e-12);
  }
  CHECK_THROWS_AS(project_mean_zero(r, f, -1e6), WeightError);
}

TEST_CASE("integration reports non-finite values") {
  const QuadratureRule r = make_rule(kCusp, 8, 3.0);
  const ScalarField bad([](const Point& p) {
    return p.x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  CHECK_THROWS_AS(integrate(r, bad), EvaluationError);
}

TEST_CASE("refinement differences decrease for smooth integrands") {
  const ScalarField f([](const Point& p) { return std::cos(3.0 * p.x); });
  auto at = [&](int n) { return integrate(make_rule(kCusp, n, 3.0), f); };
  const double d1 = std::abs(at(4) - at(8));
  const double d2 = std::abs(at(8) - at(16));
  const double d3 = std::abs(at(16) - at(32));
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(testing::rel_err(at(32), oracle::integral_cos3x) <= 1e-12);
}

TEST_CASE("integrals of non-negative fields are non-negative") {
  const QuadratureRule r = make_rule(kCusp, 16, 3.0);
  const ScalarField f([](const Point& p) { return p.y[0] * p.y[0]; });
  for (double w : {-2.0, 0.0, 3.0}) CHECK(integrate(r, f, w) >= 0.0);
}

TEST_CASE("finite-difference gradients") {
  const ScalarField sq([](const Point& p) { return p.x * p.x; });
  CHECK(fd_gradient(sq, Point(0.5, {0.0}), 1e-2)[0] == doctest::Approx(1.0).epsilon(1e-8));
  const Coords zero = fd_gradient(constant_field(2.5), Point(0.5, {0.1}), 1e-2);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  const ScalarField xy([](const Point& p) { return p.x * p.y[0]; });
  const Coords g = fd_gradient(xy, Point(0.5, {0.1}), 1e-2);
  CHECK(g[0] == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-10));

  // O(h^4): halving h cuts the error by about 16
  const ScalarField s([](const Point& p) { return std::sin(7.0 * p.x); });
  const double exact = 7.0 * std::cos(3.5);
  const double e1 = std::abs(fd_gradient(s, Point(0.5, {0.0}), 4e-2)[0] - exact);
  const double e2 = std::abs(fd_gradient(s, Point(0.5, {0.0}), 2e-2)[0] - exact);
  CHECK(e1 / e2 > 12.0);

  CHECK_THROWS_AS(fd_gradient(sq, Point(0.5, {0.2}), 0.1, &kCusp), StencilError);
  CHECK_THROWS_AS(fd_gradient(sq, Point(0.5, {0.0}), 0.0), ParameterError);
}

TEST_CASE("analytic gradients agree with finite differences") {
  const ScalarField f([](const Point& p) { return std::exp(p.x) * p.y[0]; },
                      [](const Point& p) { return Coords{std::exp(p.x) * p.y[0], std::exp(p.x)}; });
  testing::Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const Point pt = testing::random_interior(rng, kCusp, 0.3, 0.9, 0.5);
    const Coords a = f.gradient(pt);
    const Coords n = fd_gradient(f, pt, 1e-3);
    CHECK(a[0] == doctest::Approx(n[0]).epsilon(1e-9));
    CHECK(a[1] == doctest::Approx(n[1]).epsilon(1e-9));
  }
}

TEST_CASE("rule CSV dump") {
  std::ostringstream os;
  write_rule_csv(os, make_rule(CuspDomain(2.0, 1, 1), 2, 2.0));
  const std::string s = os.str();
  CHECK(s.rfind("x,y1,z1,weight\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 9);
}

TEST_CASE("ball rules") {
  for (int d = 1; d <= 3; ++d) {
    Coords c;
    for (int i = 0; i < d; ++i) c.push_back(0.3);
    const BallRule b = make_ball_rule(c, 0.2, 12, 16);
    double vol = 0.0;
    for (double w : b.weights) vol += w;
    CHECK(testing::rel_err(vol, unit_ball_volume(d) * std::pow(0.2, d)) <= 1e-12);
  }
}
