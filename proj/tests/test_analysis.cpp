#include "support.hpp"

#include "cusplab/analysis.hpp"
#include "cusplab/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "oracle_values.hpp"

using namespace cusplab;

namespace {

const CuspDomain kCusp(2.0, 1, 0);
const CuspDomain kRef(1.0, 1, 0);

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix d = SparseMatrix(a.transpose()) - a;
  return d.norm() / a.norm();
}

}  // namespace

TEST_CASE("mesh construction") {
  const GradedMesh m = build_graded_mesh(kRef, 0, 1.0, 0.1);
  MESSAGE("level-0 reference mesh: " << m.cell_count() << " cells");
  CHECK(m.cell_count() > 0);
  for (const auto& v : m.vertices) {
    CHECK(v[0] >= 0.1 - 1e-14);
    CHECK(v[0] <= 1.0 + 1e-14);
    CHECK(std::abs(v[1]) <= v[0] + 1e-14);
  }
  for (std::size_t c = 0; c < m.cell_count(); ++c) CHECK(m.cell_area(c) > 0.0);

  for (const CuspDomain& d : {kRef, kCusp}) {
    const GradedMesh a = build_graded_mesh(d, 1, d.gamma(), 0.05);
    const GradedMesh b = build_graded_mesh(d, 2, d.gamma(), 0.05);
    const double growth = static_cast<double>(b.cell_count()) / a.cell_count();
    MESSAGE("cell growth at fixed eps: " << growth);
    CHECK(growth > 3.5);
    CHECK(growth < 4.5);
  }

  CHECK_THROWS_AS(build_graded_mesh(kCusp, 0, 2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(build_graded_mesh(kCusp, 0, 2.0, -0.1), ParameterError);
  CHECK_THROWS_AS(build_graded_mesh(kCusp, -1, 2.0, 0.1), ParameterError);
  CHECK_THROWS_AS(build_graded_mesh(CuspDomain(2.0, 1, 1), 0, 2.0, 0.1), ParameterError);
  CHECK_THROWS_AS(build_graded_mesh(kCusp, 0, 2.0, 0.1, 3), ParameterError);
}

TEST_CASE("mesh area converges to the truncated domain area") {
  const double eps = 0.01;
  const double truncated = oracle::area_gamma2 - 2.0 * std::pow(eps, 3) / 3.0;
  double prev = 1.0;
  for (int level = 0; level < 4; ++level) {
    const double err = std::abs(build_graded_mesh(kCusp, level, 2.0, eps).area() - truncated);
    MESSAGE("level " << level << " area error " << err);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
  // and the truncation itself vanishes like eps^(gamma+1)
  CHECK(oracle::area_gamma2 - truncated < 1e-5);
}

TEST_CASE("Stokes operators") {
  const GradedMesh m = build_graded_mesh(kCusp, 0, 2.0, 0.1);
  const DiscreteSaddle s = assemble_stokes(m, 2.0);
  CHECK(asymmetry(s.A) <= 1e-10);
  CHECK(asymmetry(s.M) <= 1e-10);
  CHECK(asymmetry(s.M_omega) <= 1e-10);

  // b(v, 1) = 0 for every v vanishing on the boundary
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.B.rows());
  const Eigen::VectorXd bt1 = s.B.transpose() * ones;
  CHECK(bt1.norm() <= 1e-12 * s.B.norm());

  // A is positive definite: the only zero-energy field is zero
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(s.A);
  REQUIRE(ldlt.info() == Eigen::Success);
  CHECK(ldlt.vectorD().minCoeff() > 0.0);

  const DiscreteSaddle flat = assemble_stokes(m, 0.0);
  CHECK((SparseMatrix(flat.M_omega - flat.M)).norm() == 0.0);
  // M integrates constants to the mesh area
  CHECK(ones.dot(s.M * ones) == doctest::Approx(m.area()).epsilon(1e-12));
  // the d^2 weight integrates to roughly int d^2 on the truncated domain
  CHECK(ones.dot(s.M_omega * ones) == doctest::Approx(oracle::integral_d2).epsilon(0.05));
}

TEST_CASE("inf-sup Lanczos matches the dense eigensolve") {
  for (double w : {0.0, 2.0}) {
    const GradedMesh m = build_graded_mesh(kCusp, 0, 2.0, 0.1);
    const DiscreteSaddle s = assemble_stokes(m, w);
    const double lanczos = inf_sup_constant(s);
    const double dense = inf_sup_constant_dense(s);
    MESSAGE("inf-sup exponent " << w << ": " << lanczos << " vs " << dense);
    CHECK(lanczos > 0.0);
    CHECK(lanczos == doctest::Approx(dense).epsilon(1e-6));
  }
}

TEST_CASE("Korn operators and constants") {
  const GradedMesh m = build_graded_mesh(kCusp, 0, 2.0, 0.1);
  const KornSystem k = assemble_korn(m, KornWeights::theorem(0.0, 2.0));
  CHECK(asymmetry(k.K1) <= 1e-10);
  CHECK(asymmetry(k.K2) <= 1e-10);
  const double lanczos = korn_constant(k);
  const double dense = korn_constant_dense(k);
  MESSAGE("Korn: " << lanczos << " vs " << dense);
  CHECK(lanczos > 0.0);
  CHECK(lanczos == doctest::Approx(dense).epsilon(1e-6));
  CHECK(korn_constant(m, 0.0, 2.0) == doctest::Approx(lanczos).epsilon(1e-12));

  const KornWeights w = KornWeights::theorem(0.5, 2.0);
  CHECK(w.grad_exponent == 1.0);
  CHECK(w.sym_exponent == -1.0);

  CHECK_THROWS_AS(assemble_korn(m, {}, Ball2{{0.75, 0.0}, 0.6}), ParameterError);
  CHECK_THROWS_AS(assemble_korn(m, {}, Ball2{{0.12, 0.0}, 0.05}), ParameterError);
  CHECK_THROWS_AS(korn_constant(m, -0.5, 2.0), ParameterError);
}

TEST_CASE("refinement studies report positive constants") {
  StudyParams sp;
  sp.levels = 2;
  sp.eps0 = 0.1;
  const ConstantStudy is = inf_sup_study(kRef, 0.0, sp);
  REQUIRE(is.levels.size() == 2);
  for (const auto& l : is.levels) CHECK(l.constant > 0.0);
  CHECK(is.levels[1].eps_mesh == doctest::Approx(0.025));
  CHECK(is.csv().rfind("level,cells,eps_mesh,constant\n", 0) == 0);

  const ConstantStudy ks = korn_study(kRef, KornWeights::theorem(0.0, 1.0), sp);
  for (const auto& l : ks.levels) CHECK(l.constant > 0.0);
  bool has_ratio = false;
  for (const auto& [key, v] : ks.fields()) has_ratio = has_ratio || key == "last_ratio";
  CHECK(has_ratio);
}

TEST_CASE("counterexample report") {
  CHECK(integrability_exponent(2.0, 1) == doctest::Approx(oracle::r0).epsilon(1e-15));
  CHECK(integrability_exponent(1.0, 1) == 2.0);
  CHECK_THROWS_AS(counterexample_report(kRef), ParameterError);

  const CounterexampleReport r = counterexample_report(kCusp);
  CHECK(std::abs(r.integral_inv_x2 - oracle::integral_inv_x2) <= 1e-3);
  CHECK(testing::rel_err(r.area, oracle::area_gamma2) <= 1e-10);
  CHECK(std::abs(r.c_star - oracle::mean_inv_x2) <= 1e-3);
  CHECK(r.mean_with_stated_constant == doctest::Approx(2.0 - 6.0 * oracle::area_gamma2).epsilon(1e-6));
  CHECK(std::abs(r.dx2_norm_sq - oracle::dx2_norm_sq) <= 1e-2);
  CHECK(std::abs(r.weighted_norm_sq - oracle::weighted_norm_sq) <= 1e-2);
  REQUIRE(r.truncated.size() == 3);
  CHECK(r.truncated[1].second > r.truncated[0].second);
  CHECK(r.truncated_growth >= 5.0);
  REQUIRE(r.weak.size() == 5);
  CHECK(r.weak_max_rel <= 1e-3);
  CHECK(r.r == doctest::Approx(0.9 * 1.2));
  for (const auto& [order, v] : r.lr_integrals) CHECK(std::isfinite(v));
  CHECK(r.lr_rel_change <= 1e-2);
}

TEST_CASE("lifted transfer check") {
  const ScalarField one = constant_field(1.0);
  const LiftedIdentity a = lifted_korn_transfer_check(kCusp, 1, 1.0, one);
  CHECK(testing::rel_err(a.lhs, a.rhs) <= 1e-6);
  CHECK(testing::rel_err(a.rhs, oracle::lifted_n1_s1_one) <= 1e-6);

  const LiftedIdentity none = lifted_korn_transfer_check(kCusp, 0, 1.0, one);
  CHECK(none.lhs == doctest::Approx(none.rhs).epsilon(1e-14));

  const ScalarField inv_sqrt([](const Point& p) { return 1.0 / std::sqrt(p.x); });
  const LiftedIdentity c = lifted_korn_transfer_check(kCusp, 2, 1.0, inv_sqrt);
  CHECK(std::isfinite(c.lhs));
  CHECK(testing::rel_err(c.lhs, c.rhs) <= 1e-6);
  CHECK(testing::rel_err(c.rhs, oracle::lifted_n2_s1_inv_sqrt_sq) <= 1e-6);
}
