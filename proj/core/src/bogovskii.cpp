#include "cusplab/bogovskii.hpp"

#include "cusplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cusplab {

namespace {

double sq_dist(const Coords& a, const Coords& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double dot(const Coords& a, const Coords& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BumpFunction BumpFunction::make(Coords center, double radius) {
  if (!(radius > 0.0)) throw ParameterError("BumpFunction: radius must be positive");
  const int n = static_cast<int>(center.size());
  // int_B exp(-1/(1-|p|^2)) = radius^n |S^{n-1}| int_0^1 exp(-1/(1-s^2)) s^{n-1} ds
  const GaussRule& g = gauss_legendre(256);
  double radial = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = g.nodes[i];
    radial += g.weights[i] * std::exp(-1.0 / (1.0 - s * s)) * std::pow(s, n - 1);
  }
  const double sphere = n * unit_ball_volume(n);
  const double mass = std::pow(radius, n) * sphere * radial;
  return {std::move(center), radius, 1.0 / mass};
}

double bump_eval(const BumpFunction& phi, const Coords& pt) {
  const double r2 = sq_dist(pt, phi.center) / (phi.radius * phi.radius);
  if (r2 >= 1.0) return 0.0;
  return phi.normalization * std::exp(-1.0 / (1.0 - r2));
}

double bump_eval(const BumpFunction& phi, const Point& pt) {
  const Coords c = pt.coords();
  return bump_eval(phi, c);
}

Coords bump_gradient(const BumpFunction& phi, const Coords& pt) {
  Coords g(pt.size(), 0.0);
  const double rho2 = phi.radius * phi.radius;
  const double r2 = sq_dist(pt, phi.center) / rho2;
  if (r2 >= 1.0) return g;
  const double v = phi.normalization * std::exp(-1.0 / (1.0 - r2));
  const double s = -2.0 * v / (rho2 * (1.0 - r2) * (1.0 - r2));
  for (std::size_t i = 0; i < pt.size(); ++i) g[i] = s * (pt[i] - phi.center[i]);
  return g;
}

StarDomain StarDomain::standard(int k, int m) {
  CuspDomain ref(1.0, k, m);
  Coords c;
  c.push_back(0.75);
  for (int i = 0; i < k; ++i) c.push_back(0.0);
  for (int i = 0; i < m; ++i) c.push_back(0.5);
  return {ref, BumpFunction::make(c, 0.125)};
}

std::optional<RInterval> kernel_r_interval(const Coords& x, const Coords& y,
                                           const BumpFunction& phi) {
  Coords d, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d.push_back(x[i] - y[i]);
    w.push_back(y[i] - phi.center[i]);
  }
  const double dd = dot(d, d);
  if (dd == 0.0) throw SingularPointError("kernel_r_interval: x and y coincide");
  const double wd = dot(w, d);
  const double disc = wd * wd - dd * (dot(w, w) - phi.radius * phi.radius);
  if (disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double hi = (-wd + sq) / dd;
  const double lo = std::max(1.0, (-wd - sq) / dd);
  if (hi <= lo) return std::nullopt;
  return RInterval{lo, hi};
}

Coords bogovskii_kernel(const BumpFunction& phi, const Coords& x,
                        const Coords& y, int order) {
  const std::size_t n = x.size();
  Coords out(n, 0.0);
  const auto iv = kernel_r_interval(x, y, phi);
  if (!iv) return out;
  const GaussRule& g = gauss_legendre(order);
  const double len = iv->hi - iv->lo;
  double s = 0.0;
  Coords p(n, 0.0);
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double r = iv->lo + len * g.nodes[q];
    for (std::size_t i = 0; i < n; ++i) p[i] = y[i] + r * (x[i] - y[i]);
    s += g.weights[q] * bump_eval(phi, p) * std::pow(r, static_cast<double>(n) - 1.0);
  }
  s *= len;
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - y[i]) * s;
  return out;
}

namespace {

void check_mean_zero(const QuadratureRule& rule, const ScalarField& f, double tol, double& mean) {
  const double integral = integrate(rule, f);
  const double l1 = weighted_lp_norm(rule, f, 1.0);
  mean = integral;
  if (std::abs(integral) > tol * l1) {
    std::ostringstream os;
    os.precision(6);
    os << "Bogovskii inversion needs mean-zero data: measured integral " << integral
       << " exceeds " << tol << " * ||f||_L1 = " << tol * l1;
    throw NotMeanZero(os.str());
  }
}

}  // namespace

Coords bogovskii_eval(const StarDomain& domain, const ScalarField& f, const Point& x,
                      const QuadratureRule& rule, double mean_tol) {
  if (!(rule.domain == domain.reference))
    throw ParameterError("bogovskii_eval: rule is not built on the reference domain");
  if (!contains(domain.reference, x))
    throw DomainError("bogovskii_eval: " + x.to_string() + " is not interior to the reference domain");
  double mean = 0.0;
  check_mean_zero(rule, f, mean_tol, mean);

  const Coords xc = x.coords();
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double d2 = sq_dist(rule.nodes[i].coords(), xc);
    if (d2 < best) {
      best = d2;
      nearest = i;
    }
  }
  Coords u(xc.size(), 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (i == nearest) continue;
    const Coords yc = rule.nodes[i].coords();
    const double fy = f(rule.nodes[i]);
    if (fy == 0.0) continue;
    const Coords g = bogovskii_kernel(domain.phi, xc, yc);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += rule.weights[i] * g[j] * fy;
  }
  return u;
}

BogovskiiSolver::BogovskiiSolver(StarDomain domain, ScalarField f, const QuadratureRule& mean_rule,
                                 RayOrders orders, double mean_tol)
    : domain_(std::move(domain)), f_(std::move(f)), orders_(orders) {
  if (!(mean_rule.domain == domain_.reference))
    throw ParameterError("BogovskiiSolver: mean rule is not built on the reference domain");
  if (orders_.angular < 2 || orders_.radial < 2 || orders_.chord < 2)
    throw ParameterError("BogovskiiSolver: ray orders must be >= 2");
  const int n = domain_.reference.n();
  if (n > 3) throw ParameterError("BogovskiiSolver: polar evaluation supports n <= 3");
  check_mean_zero(mean_rule, f_, mean_tol, mean_);
}

double BogovskiiSolver::exit_distance(const Coords& x, const Coords& dir) const {
  const int k = domain_.reference.k();
  const std::size_t n = x.size();
  double best = std::numeric_limits<double>::infinity();
  if (dir[0] > 0.0) best = (1.0 - x[0]) / dir[0];
  for (std::size_t i = 1 + static_cast<std::size_t>(k); i < n; ++i) {
    if (dir[i] > 0.0) best = std::min(best, (1.0 - x[i]) / dir[i]);
    if (dir[i] < 0.0) best = std::min(best, -x[i] / dir[i]);
  }
  // Cone |y| < x: first positive root of a r^2 + b r + c with c < 0.
  double yy = 0.0, yd = 0.0, dd = 0.0;
  for (int i = 1; i <= k; ++i) {
    yy += x[i] * x[i];
    yd += x[i] * dir[i];
    dd += dir[i] * dir[i];
  }
  const double a = dd - dir[0] * dir[0];
  const double b = 2.0 * (yd - x[0] * dir[0]);
  const double c = yy - x[0] * x[0];
  double root = std::numeric_limits<double>::infinity();
  if (std::abs(a) < 1e-14 * (dd + dir[0] * dir[0])) {
    if (b > 0.0) root = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      const double r1 = q / a;
      const double r2 = (q != 0.0) ? c / q : r1;
      for (double r : {r1, r2})
        if (r > 0.0) root = std::min(root, r);
    }
  }
  return std::min(best, root);
}

Coords BogovskiiSolver::eval_unchecked(const Coords& x) const {
  const std::size_t n = x.size();
  const BumpFunction& phi = domain_.phi;
  const double rho = phi.radius;
  Coords a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = phi.center[i] - x[i];
  const double dist = norm(a);
  const bool inside_ball = dist <= rho;

  const GaussRule& gr = gauss_legendre(orders_.radial);
  const GaussRule& gc = gauss_legendre(orders_.chord);
  const std::size_t k = static_cast<std::size_t>(domain_.reference.k());

  Coords u(n, 0.0);
  Coords p(n, 0.0);
  Coords back(n, 0.0);
  double moments[kMaxDim];
  double radial[kMaxDim];

  auto accumulate = [&](const Coords& theta, double weight) {
    // forward chord through the ball
    const double b = dot(a, theta);
    const double disc = b * b - dist * dist + rho * rho;
    if (disc <= 0.0) return;
    const double sq = std::sqrt(disc);
    const double xi_hi = b + sq;
    const double xi_lo = std::max(0.0, b - sq);
    if (xi_hi <= xi_lo) return;
    const double len = xi_hi - xi_lo;
    std::fill(moments, moments + n, 0.0);
    for (std::size_t q = 0; q < gc.nodes.size(); ++q) {
      const double xi = xi_lo + len * gc.nodes[q];
      for (std::size_t i = 0; i < n; ++i) p[i] = x[i] + xi * theta[i];
      const double w = gc.weights[q] * len * bump_eval(phi, p);
      if (w == 0.0) continue;
      double pw = 1.0;
      // moments[j] = int phi xi^{n-1-j}
      for (std::size_t j = n; j-- > 0;) {
        moments[j] += w * pw;
        pw *= xi;
      }
    }
    for (std::size_t i = 0; i < n; ++i) back[i] = -theta[i];
    const double reach = exit_distance(x, back);
    if (!(reach > 0.0) || !std::isfinite(reach)) return;
    std::fill(radial, radial + n, 0.0);
    for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
      // rho = R (1 - (1-t)^2) clusters nodes at the exit point
      const double s = 1.0 - gr.nodes[q];
      const double r = reach * (1.0 - s * s);
      const double jac = 2.0 * reach * s * gr.weights[q];
      for (std::size_t i = 0; i < n; ++i) p[i] = x[i] - r * theta[i];
      const double fv = f_(Point::from_coords(p, k)) * jac;
      double pw = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        radial[j] += fv * pw;
        pw *= r;
      }
    }
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      s += binomial(static_cast<int>(n) - 1, static_cast<int>(j)) * moments[j] * radial[j];
    for (std::size_t i = 0; i < n; ++i) u[i] += weight * s * theta[i];
  };

  const double centre_angle = std::atan2(a[1], a[0]);
  if (n == 2) {
    const double half = inside_ball ? std::numbers::pi : std::asin(rho / dist);
    const double lo = centre_angle - half;
    const double hi = centre_angle + half;
    std::vector<double> cuts{lo, hi};
    // -theta pointing at a corner of the triangle makes R(theta) kink
    const double corners[3][2] = {{0.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}};
    for (const auto& v : corners) {
      double ang = std::atan2(x[1] - v[1], x[0] - v[0]);
      while (ang < lo) ang += 2.0 * std::numbers::pi;
      while (ang > hi) ang -= 2.0 * std::numbers::pi;
      if (ang > lo && ang < hi) cuts.push_back(ang);
    }
    std::sort(cuts.begin(), cuts.end());
    const GaussRule& ga = gauss_legendre(orders_.angular);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double width = cuts[c + 1] - cuts[c];
      if (width <= 0.0) continue;
      for (std::size_t q = 0; q < ga.nodes.size(); ++q) {
        const double ang = cuts[c] + width * ga.nodes[q];
        accumulate(Coords{std::cos(ang), std::sin(ang)}, width * ga.weights[q]);
      }
    }
  } else {
    // n = 3: spherical cap about the ball direction, polar angle psi in [0, half].
    const double half = inside_ball ? std::numbers::pi : std::asin(rho / dist);
    Coords e0(3, 0.0);
    if (dist > 0.0) {
      for (std::size_t i = 0; i < 3; ++i) e0[i] = a[i] / dist;
    } else {
      e0[0] = 1.0;
    }
    // orthonormal completion
    Coords e1(3, 0.0);
    const std::size_t pivot = std::abs(e0[0]) < 0.9 ? 0 : 1;
    e1[pivot] = 1.0;
    const double proj = dot(e1, e0);
    for (std::size_t i = 0; i < 3; ++i) e1[i] -= proj * e0[i];
    const double n1 = norm(e1);
    for (double& c : e1) c /= n1;
    const Coords e2{e0[1] * e1[2] - e0[2] * e1[1], e0[2] * e1[0] - e0[0] * e1[2],
                    e0[0] * e1[1] - e0[1] * e1[0]};
    const GaussRule& ga = gauss_legendre(orders_.angular);
    const int azimuth = 2 * orders_.angular;
    const double dchi = 2.0 * std::numbers::pi / azimuth;
    for (std::size_t q = 0; q < ga.nodes.size(); ++q) {
      const double psi = half * ga.nodes[q];
      const double wpsi = half * ga.weights[q] * std::sin(psi);
      for (int j = 0; j < azimuth; ++j) {
        const double chi = (j + 0.5) * dchi;
        Coords theta(3, 0.0);
        for (std::size_t i = 0; i < 3; ++i)
          theta[i] = std::cos(psi) * e0[i] +
                     std::sin(psi) * (std::cos(chi) * e1[i] + std::sin(chi) * e2[i]);
        accumulate(theta, wpsi * dchi);
      }
    }
  }
  return u;
}

Coords BogovskiiSolver::operator()(const Point& x) const {
  if (!contains(domain_.reference, x))
    throw DomainError("Bogovskii field: " + x.to_string() + " is not interior to the reference domain");
  const Coords c = x.coords();
  return eval_unchecked(c);
}

Jacobian BogovskiiSolver::jacobian(const Point& x) const {
  const double clearance = boundary_clearance(domain_.reference, x);
  if (!(clearance > 0.0))
    throw DomainError("Bogovskii jacobian: " + x.to_string() + " is not interior");
  const double h = std::min(fd_step, 0.25 * clearance);
  VectorField self;
  self.value = [this](const Point& q) { return (*this)(q); };
  return fd_jacobian(self, x, h, &domain_.reference);
}

VectorField BogovskiiSolver::field() const {
  // The field owns a copy so it may outlive this solver.
  auto self = std::make_shared<const BogovskiiSolver>(*this);
  VectorField v;
  v.value = [self](const Point& q) { return (*self)(q); };
  v.jacobian = [self](const Point& q) { return self->jacobian(q); };
  return v;
}

ResidualReport div_residual(const CuspDomain& domain, const ScalarField& f, const VectorField& u,
                            std::span<const Point> probes, double h) {
  ResidualReport rep;
  std::vector<double> abs_res(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Point& pt = probes[i];
    const Jacobian jac = fd_jacobian(u, pt, h, &domain);
    double div = 0.0;
    for (std::size_t j = 0; j < jac.size(); ++j) div += jac[j][j];
    const double fv = f(pt);
    if (!std::isfinite(div) || !std::isfinite(fv))
      throw EvaluationError("div_residual: non-finite value at probe " + pt.to_string());
    abs_res[i] = std::abs(div - fv);
    rep.f_scale = std::max(rep.f_scale, std::abs(fv));
  }
  const double scale = rep.f_scale > 0.0 ? rep.f_scale : 1.0;
  for (double r : abs_res) {
    rep.per_probe.push_back(r / scale);
    rep.max_rel = std::max(rep.max_rel, r / scale);
  }
  return rep;
}

std::vector<Point> interior_probes(const CuspDomain& domain, std::size_t count, std::uint64_t seed,
                                   double x_lo, double x_hi, double y_frac) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Point> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    Point p;
    p.x = x_lo + (x_hi - x_lo) * uniform();
    const double radius = y_frac * std::pow(p.x, domain.gamma());
    // rejection sample of the k-ball
    Coords y;
    double r2 = 0.0;
    do {
      y.clear();
      r2 = 0.0;
      for (int i = 0; i < domain.k(); ++i) {
        const double c = 2.0 * uniform() - 1.0;
        y.push_back(c);
        r2 += c * c;
      }
    } while (r2 >= 1.0);
    for (double& c : y) c *= radius;
    p.y = y;
    for (int i = 0; i < domain.m(); ++i) p.z.push_back(0.2 + 0.6 * uniform());
    if (contains(domain, p)) pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace cusplab
