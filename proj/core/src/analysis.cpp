#include "cusplab/analysis.hpp"

#include "cusplab/bogovskii.hpp"
#include "cusplab/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace cusplab {

namespace {

using Vec = Eigen::VectorXd;
using Solver = Eigen::SimplicialLDLT<SparseMatrix>;

void factorize(Solver& solver, const SparseMatrix& m, const char* what) {
  solver.compute(m);
  if (solver.info() != Eigen::Success)
    throw AssemblyError(std::string(what) + ": factorisation failed (matrix singular or indefinite)");
  if ((solver.vectorD().array() <= 0.0).any())
    throw AssemblyError(std::string(what) + ": matrix is not positive definite");
}

double m_norm(const SparseMatrix& m, const Vec& v) { return std::sqrt(v.dot(m * v)); }

// Extreme eigenvalue of an operator T that is self-adjoint in the K inner
// product, by Lanczos with full reorthogonalisation. `deflate` holds
// K-orthonormal vectors kept out of the Krylov space.
double lanczos_extreme(const std::function<Vec(const Vec&)>& apply_t, const SparseMatrix& k,
                       bool smallest, const std::vector<Vec>& deflate, const EigenOptions& opts) {
  const Eigen::Index n = k.rows();
  std::mt19937_64 rng(opts.seed);
  Vec q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;

  std::vector<Vec> basis;
  auto orthogonalise = [&](Vec& w) {
    for (int pass = 0; pass < 2; ++pass) {
      const Vec kw = k * w;
      for (const Vec& d : deflate) w -= d.dot(kw) * d;
      for (const Vec& b : basis) w -= b.dot(kw) * b;
    }
  };
  orthogonalise(q);
  q /= m_norm(k, q);

  const int limit = static_cast<int>(
      std::min<Eigen::Index>(opts.max_iter, n - static_cast<Eigen::Index>(deflate.size())));
  std::vector<double> alpha, beta;
  double theta = 0.0;
  for (int j = 0; j < limit; ++j) {
    basis.push_back(q);
    Vec w = apply_t(q);
    const double a = w.dot(k * q);
    w -= a * q;
    if (j > 0) w -= beta.back() * basis[j - 1];
    orthogonalise(w);
    const double b = m_norm(k, w);
    alpha.push_back(a);
    beta.push_back(b);

    const int sz = j + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(sz, sz);
    for (int i = 0; i < sz; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < sz) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const int idx = smallest ? 0 : sz - 1;
    theta = es.eigenvalues()[idx];
    const double resid = std::abs(b * es.eigenvectors()(sz - 1, idx));
    const double scale = std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[sz - 1]));
    if (resid <= opts.tol * scale || b <= 1e-14 * scale) return theta;
    q = w / b;
  }
  return theta;
}

// Solves S x = r for S = B A^{-1} B^T through the saddle system with the
// first pressure pinned; r must be orthogonal to the constants.
class SchurSolver {
 public:
  explicit SchurSolver(const DiscreteSaddle& s) : nv_(s.A.rows()), np_(s.B.rows()) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(s.A.nonZeros() + 2 * s.B.nonZeros());
    for (Eigen::Index c = 0; c < s.A.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(s.A, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index c = 0; c < s.B.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(s.B, c); it; ++it) {
        if (it.row() == 0) continue;
        const Eigen::Index pr = nv_ + it.row() - 1;
        t.emplace_back(pr, it.col(), it.value());
        t.emplace_back(it.col(), pr, it.value());
      }
    const Eigen::Index n = nv_ + np_ - 1;
    SparseMatrix k(n, n);
    k.setFromTriplets(t.begin(), t.end());
    k.makeCompressed();
    lu_.analyzePattern(k);
    lu_.factorize(k);
    if (lu_.info() != Eigen::Success)
      throw AssemblyError("inf_sup_constant: saddle-point factorisation failed");
  }

  // Returns x with S x = r, defined up to a constant.
  [[nodiscard]] Vec solve(const Vec& r) const {
    Vec rhs = Vec::Zero(nv_ + np_ - 1);
    rhs.tail(np_ - 1) = r.tail(np_ - 1);
    const Vec sol = lu_.solve(rhs);
    Vec x = Vec::Zero(np_);
    // A u + B^T x = 0, B u = r gives -S x = r.
    x.tail(np_ - 1) = -sol.tail(np_ - 1);
    return x;
  }

 private:
  Eigen::Index nv_, np_;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace

double inf_sup_constant(const DiscreteSaddle& saddle, const EigenOptions& opts) {
  const SchurSolver schur(saddle);
  const SparseMatrix& m = saddle.M_omega;
  Vec ones = Vec::Ones(m.rows());
  ones /= m_norm(m, ones);
  const Vec m_ones = m * ones;
  // S^{-1} M_omega is self-adjoint in the M_omega product; its largest
  // eigenvalue is 1 / lambda_min, well separated even when the weight
  // stretches the upper spectrum of M_omega^{-1} S.
  auto apply = [&](const Vec& q) -> Vec {
    Vec x = schur.solve(m * q);
    x -= m_ones.dot(x) * ones;
    return x;
  };
  const double mu = lanczos_extreme(apply, m, false, {ones}, opts);
  if (!std::isfinite(mu) || !(mu > 0.0)) throw EvaluationError("inf_sup_constant: non-finite eigenvalue");
  return std::sqrt(1.0 / mu);
}

double inf_sup_constant_dense(const DiscreteSaddle& saddle) {
  Solver a_solve;
  factorize(a_solve, saddle.A, "inf_sup_constant_dense: velocity matrix");
  const Eigen::MatrixXd bt = Eigen::MatrixXd(saddle.B.transpose());
  const Eigen::MatrixXd x = a_solve.solve(bt);
  Eigen::MatrixXd s = saddle.B * x;
  s = 0.5 * (s + s.transpose()).eval();
  const Eigen::MatrixXd m = Eigen::MatrixXd(saddle.M_omega);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, m);
  // The smallest eigenvalue belongs to the constants.
  return std::sqrt(std::max(es.eigenvalues()[1], 0.0));
}

double korn_constant(const KornSystem& system, const EigenOptions& opts) {
  Solver k1_solve;
  factorize(k1_solve, system.K1, "korn_constant: K1");
  auto apply = [&](const Vec& u) -> Vec { return k1_solve.solve(system.K2 * u); };
  const double mu = lanczos_extreme(apply, system.K1, false, {}, opts);
  if (!std::isfinite(mu)) throw EvaluationError("korn_constant: non-finite eigenvalue");
  return std::sqrt(std::max(mu, 0.0));
}

double korn_constant_dense(const KornSystem& system) {
  const Eigen::MatrixXd k1 = Eigen::MatrixXd(system.K1);
  const Eigen::MatrixXd k2 = Eigen::MatrixXd(system.K2);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k2, k1);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

double korn_constant(const GradedMesh& mesh, double beta, double gamma, const Ball2& ball,
                     const EigenOptions& opts) {
  if (beta < 0.0) throw ParameterError("korn_constant: beta must be >= 0");
  return korn_constant(assemble_korn(mesh, KornWeights::theorem(beta, gamma), ball), opts);
}

// ---------------------------------------------------------------------------

ReportFields ConstantStudy::fields() const {
  ReportFields f{{"gamma", gamma}, {"weight_exponent", weight_exponent}};
  if (kind == "korn") f.emplace_back("sym_exponent", sym_exponent);
  f.emplace_back("eps0", params.eps0);
  f.emplace_back("base_cross", static_cast<double>(params.base_cross));
  f.emplace_back("grading", params.grading);
  for (const LevelConstant& l : levels) {
    const std::string s = "_level_" + std::to_string(l.level);
    f.emplace_back("cells" + s, static_cast<double>(l.cells));
    f.emplace_back("eps_mesh" + s, l.eps_mesh);
    f.emplace_back("constant" + s, l.constant);
  }
  f.emplace_back("last_ratio", last_ratio());
  return f;
}

std::string ConstantStudy::csv() const {
  std::string out = "level,cells,eps_mesh,constant\n";
  for (const LevelConstant& l : levels)
    out += std::to_string(l.level) + "," + std::to_string(l.cells) + "," + format_double(l.eps_mesh) +
           "," + format_double(l.constant) + "\n";
  return out;
}

double ConstantStudy::last_ratio() const {
  if (levels.size() < 2) return 1.0;
  return levels.back().constant / levels[levels.size() - 2].constant;
}

bool ConstantStudy::strictly_decreasing() const {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].constant < levels[i - 1].constant)) return false;
  return levels.size() >= 2;
}

bool ConstantStudy::strictly_increasing() const {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].constant > levels[i - 1].constant)) return false;
  return levels.size() >= 2;
}

namespace {

template <class Fn>
ConstantStudy run_study(const CuspDomain& domain, StudyParams params, Fn&& constant_of) {
  if (params.levels < 1) throw ParameterError("study: levels must be >= 1");
  if (params.grading == 0.0) params.grading = domain.gamma();
  ConstantStudy st;
  st.gamma = domain.gamma();
  st.params = params;
  for (int l = 0; l < params.levels; ++l) {
    const double eps = params.eps0 * std::pow(4.0, -l);
    const GradedMesh mesh = build_graded_mesh(domain, l, params.grading, eps, params.base_cross);
    st.levels.push_back({l, mesh.cell_count(), eps, constant_of(mesh)});
  }
  return st;
}

}  // namespace

ConstantStudy inf_sup_study(const CuspDomain& domain, double weight_exponent, const StudyParams& params) {
  ConstantStudy st = run_study(domain, params, [&](const GradedMesh& mesh) {
    return inf_sup_constant(assemble_stokes(mesh, weight_exponent), params.eig);
  });
  st.kind = "infsup";
  st.weight_exponent = weight_exponent;
  return st;
}

ConstantStudy korn_study(const CuspDomain& domain, const KornWeights& weights, const StudyParams& params,
                         const Ball2& ball) {
  ConstantStudy st = run_study(domain, params, [&](const GradedMesh& mesh) {
    return korn_constant(assemble_korn(mesh, weights, ball), params.eig);
  });
  st.kind = "korn";
  st.weight_exponent = weights.grad_exponent;
  st.sym_exponent = weights.sym_exponent;
  return st;
}

// ---------------------------------------------------------------------------

double integrability_exponent(double gamma, int k) {
  return 2.0 - 4.0 * (gamma - 1.0) / (gamma * (k + 2) - 1.0);
}

ReportFields CounterexampleReport::fields() const {
  ReportFields f{{"integral_inv_x2", integral_inv_x2},
                 {"area", area},
                 {"c_star", c_star},
                 {"stated_constant", stated_constant},
                 {"mean_with_stated_constant", mean_with_stated_constant}};
  for (std::size_t i = 0; i < truncated.size(); ++i) {
    f.emplace_back("truncation_eps_" + std::to_string(i), truncated[i].first);
    f.emplace_back("truncated_p2_" + std::to_string(i), truncated[i].second);
  }
  f.emplace_back("truncated_growth", truncated_growth);
  f.emplace_back("weighted_norm_sq", weighted_norm_sq);
  f.emplace_back("dx2_norm_sq", dx2_norm_sq);
  for (std::size_t i = 0; i < weak.size(); ++i) {
    f.emplace_back("weak_lhs_" + std::to_string(i), weak[i].lhs);
    f.emplace_back("weak_rhs_" + std::to_string(i), weak[i].rhs);
  }
  f.emplace_back("weak_max_rel", weak_max_rel);
  f.emplace_back("r0", r0);
  f.emplace_back("r", r);
  for (const auto& [order, v] : lr_integrals) f.emplace_back("lr_integral_n" + std::to_string(order), v);
  f.emplace_back("lr_rel_change", lr_rel_change);
  return f;
}

CounterexampleReport counterexample_report(const CuspDomain& domain, const CounterexampleParams& params) {
  if (domain.gamma() != 2.0 || domain.k() != 1 || domain.m() != 0)
    throw ParameterError("counterexample_report: requires gamma = 2, k = 1, m = 0");
  CounterexampleReport rep;
  const QuadratureRule rule = make_rule(domain, params.order, params.grading);
  const ScalarField inv_x2([](const Point& pt) { return 1.0 / (pt.x * pt.x); });
  rep.integral_inv_x2 = integrate(rule, inv_x2);
  rep.area = rule.total_weight();
  const ScalarField p_field = project_mean_zero(rule, inv_x2);
  rep.c_star = weighted_mean(rule, inv_x2);
  rep.mean_with_stated_constant = rep.integral_inv_x2 - rep.stated_constant * rep.area;
  const double c = rep.c_star;
  auto p_sq = [c](const Point& pt) {
    const double v = 1.0 / (pt.x * pt.x) - c;
    return v * v;
  };

  for (double eps : params.truncations) {
    const QuadratureRule tr = make_rule(domain, params.order, params.grading, eps);
    rep.truncated.emplace_back(eps, integrate(tr, ScalarField(p_sq)));
  }
  if (rep.truncated.size() >= 2)
    rep.truncated_growth = rep.truncated.back().second / rep.truncated[rep.truncated.size() - 2].second;

  rep.weighted_norm_sq = integrate(rule, ScalarField([&p_field](const Point& pt) {
                                     const double v = p_field(pt);
                                     return v * v;
                                   }),
                                   2.0);
  rep.dx2_norm_sq = integrate(rule, ScalarField([](const Point& pt) {
                                const double v = -2.0 * pt.y[0] / (pt.x * pt.x * pt.x);
                                return v * v;
                              }));

  // Weak derivative identity against bumps placed at random interior points.
  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int b = 0; b < params.bumps; ++b) {
    const double x = 0.3 + 0.6 * uniform();
    const double y = (2.0 * uniform() - 1.0) * 0.5 * x * x;
    const Point centre(x, {y});
    const double radius = 0.8 * boundary_clearance(domain, centre);
    const BumpFunction phi = BumpFunction::make(Coords{x, y}, radius);
    const BallRule br = make_ball_rule(phi.center, radius, 48, 96);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < br.nodes.size(); ++i) {
      const Coords& q = br.nodes[i];
      const Coords g = bump_gradient(phi, q);
      lhs += br.weights[i] * (1.0 / (q[0] * q[0]) - c) * g[0];
      rhs += br.weights[i] * (-2.0 * q[1] / (q[0] * q[0] * q[0])) * g[1];
    }
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    rep.weak.push_back({lhs, rhs, rel});
    rep.weak_max_rel = std::max(rep.weak_max_rel, rel);
  }

  rep.r0 = integrability_exponent(domain.gamma(), domain.k());
  rep.r = 0.9 * rep.r0;
  const double r = rep.r;
  for (int order : {params.order / 2, params.order, 2 * params.order}) {
    const QuadratureRule lr = make_rule(domain, order, params.grading);
    rep.lr_integrals.emplace_back(order, integrate(lr, ScalarField([c, r](const Point& pt) {
                                                     return std::pow(std::abs(1.0 / (pt.x * pt.x) - c), r);
                                                   })));
  }
  const double a = rep.lr_integrals[1].second;
  const double b = rep.lr_integrals[2].second;
  rep.lr_rel_change = std::abs(b - a) / std::abs(b);
  return rep;
}

LiftedIdentity lifted_korn_transfer_check(const CuspDomain& domain, int n_prime, double s,
                                          const ScalarField& g, double p, int order, double grading) {
  const LiftedDomain lifted(domain, n_prime, s);
  const ScalarField gp([g, p](const Point& pt) { return std::pow(std::abs(g(pt)), p); });
  return lifted_integral_identity(lifted, gp, order, grading);
}

}  // namespace cusplab
