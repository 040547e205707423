#include "cusplab/analysis.hpp"
#include "cusplab/errors.hpp"
#include "cusplab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cusplab {

double GradedMesh::cell_area(std::size_t c) const {
  const auto& [a, b, d] = cells[c];
  const auto& p0 = vertices[a];
  const auto& p1 = vertices[b];
  const auto& p2 = vertices[d];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double GradedMesh::area() const {
  double s = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) s += cell_area(c);
  return s;
}

GradedMesh build_graded_mesh(const CuspDomain& domain, int level, double grading, double eps_mesh,
                             int base_cross) {
  if (domain.k() != 1 || domain.m() != 0)
    throw ParameterError("build_graded_mesh: only the planar profile k = 1, m = 0 is meshed");
  if (level < 0) throw ParameterError("build_graded_mesh: level must be >= 0");
  if (!(eps_mesh > 0.0) || !(eps_mesh < 1.0))
    throw ParameterError("build_graded_mesh: eps_mesh must lie in (0, 1)");
  if (!(grading >= 1.0)) throw ParameterError("build_graded_mesh: grading must be >= 1");
  if (base_cross < 1 || base_cross % 2 != 0)
    throw ParameterError("build_graded_mesh: base_cross must be a positive even number");

  GradedMesh mesh;
  mesh.domain = domain;
  mesh.level = level;
  mesh.grading = grading;
  mesh.eps_mesh = eps_mesh;
  const int J = base_cross << level;
  mesh.cross_cells = J;

  // Layers are laid out from x = 1 towards the tip so the far end of the mesh
  // does not depend on eps_mesh; the final gap is merged at the tip.
  std::vector<double> xs{1.0};
  while (xs.back() > eps_mesh) {
    const double x = xs.back();
    const double step = 2.0 * std::pow(x, grading) / J;
    if (x - step <= eps_mesh + 0.5 * 2.0 * std::pow(eps_mesh, grading) / J) {
      xs.push_back(eps_mesh);
      break;
    }
    xs.push_back(x - step);
  }
  std::reverse(xs.begin(), xs.end());

  const double g = domain.gamma();
  const std::size_t layers = xs.size();
  mesh.vertices.reserve(layers * (J + 1));
  mesh.on_boundary.reserve(layers * (J + 1));
  for (std::size_t i = 0; i < layers; ++i) {
    const double h = std::pow(xs[i], g);
    for (int j = 0; j <= J; ++j) {
      mesh.vertices.push_back({xs[i], -h + 2.0 * h * j / J});
      const bool edge = i == 0 || i + 1 == layers || j == 0 || j == J;
      mesh.on_boundary.push_back(edge ? 1 : 0);
    }
  }
  auto id = [J](std::size_t i, int j) { return static_cast<int>(i * (J + 1) + j); };
  mesh.cells.reserve(2 * (layers - 1) * J);
  for (std::size_t i = 0; i + 1 < layers; ++i) {
    for (int j = 0; j < J; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      // Alternate the diagonal about the axis so the mesh is mirror symmetric.
      if (j < J / 2) {
        mesh.cells.push_back({a, b, c});
        mesh.cells.push_back({a, c, d});
      } else {
        mesh.cells.push_back({a, b, d});
        mesh.cells.push_back({b, c, d});
      }
    }
  }
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (!(mesh.cell_area(c) > 0.0)) {
      std::ostringstream os;
      os << "build_graded_mesh: cell " << c << " has non-positive area";
      throw AssemblyError(os.str());
    }
  }
  return mesh;
}

namespace {

// Values and gradients of lambda_0..2 and the cubic bubble at one point.
struct ShapeAt {
  double w;  // physical quadrature weight
  double x, y;
  std::array<double, 4> val;
  std::array<std::array<double, 2>, 4> grad;
};

struct TriRule {
  std::vector<std::array<double, 3>> pts;  // (l1, l2, weight) on the reference triangle, weights sum to 1/2
};

TriRule collapsed_rule(int n) {
  const GaussRule& gr = gauss_legendre(n);
  TriRule r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = gr.nodes[i];
      const double v = gr.nodes[j];
      r.pts.push_back({u, v * (1.0 - u), gr.weights[i] * gr.weights[j] * (1.0 - u)});
    }
  return r;
}

const TriRule& cell_rule() {
  static const TriRule r = collapsed_rule(4);
  return r;
}

std::vector<ShapeAt> shapes_on(const GradedMesh& mesh, std::size_t c, const TriRule& rule,
                               const std::array<double, 3>* sub = nullptr) {
  const auto& cell = mesh.cells[c];
  const auto& p0 = mesh.vertices[cell[0]];
  const auto& p1 = mesh.vertices[cell[1]];
  const auto& p2 = mesh.vertices[cell[2]];
  const double two_a = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const std::array<std::array<double, 2>, 3> gl{{
      {(p1[1] - p2[1]) / two_a, (p2[0] - p1[0]) / two_a},
      {(p2[1] - p0[1]) / two_a, (p0[0] - p2[0]) / two_a},
      {(p0[1] - p1[1]) / two_a, (p1[0] - p0[0]) / two_a},
  }};
  std::vector<ShapeAt> out;
  out.reserve(rule.pts.size());
  for (const auto& q : rule.pts) {
    double l1 = q[0], l2 = q[1], w = q[2];
    if (sub) {  // affine sub-triangle given by its scale and offset in (l1, l2)
      l1 = (*sub)[1] + (*sub)[0] * l1;
      l2 = (*sub)[2] + (*sub)[0] * l2;
      w *= (*sub)[0] * (*sub)[0];
    }
    const double l0 = 1.0 - l1 - l2;
    ShapeAt s{};
    s.w = w * two_a;
    s.x = l0 * p0[0] + l1 * p1[0] + l2 * p2[0];
    s.y = l0 * p0[1] + l1 * p1[1] + l2 * p2[1];
    const std::array<double, 3> l{l0, l1, l2};
    for (int i = 0; i < 3; ++i) {
      s.val[i] = l[i];
      s.grad[i] = gl[i];
    }
    s.val[3] = 27.0 * l0 * l1 * l2;
    for (int d = 0; d < 2; ++d)
      s.grad[3][d] = 27.0 * (gl[0][d] * l1 * l2 + gl[1][d] * l0 * l2 + gl[2][d] * l0 * l1);
    out.push_back(s);
  }
  return out;
}

double weight_at(double x, double y, double exponent) {
  if (exponent == 0.0) return 1.0;
  return std::pow(x * x + y * y, 0.5 * exponent);
}

// Velocity numbering: scalar basis ids, then dof = 2 * id + component.
struct VelocityMap {
  std::vector<int> vertex_id;  // -1 for constrained vertices
  int bubble_base = 0;
  int scalar_count = 0;
  [[nodiscard]] int dof(const GradedMesh& mesh, std::size_t c, int a, int comp) const {
    const int sid = a < 3 ? vertex_id[mesh.cells[c][a]] : bubble_base + static_cast<int>(c);
    return sid < 0 ? -1 : 2 * sid + comp;
  }
};

VelocityMap velocity_map(const GradedMesh& mesh, bool dirichlet) {
  VelocityMap vm;
  vm.vertex_id.assign(mesh.vertices.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (!dirichlet || !mesh.on_boundary[v]) vm.vertex_id[v] = next++;
  vm.bubble_base = next;
  vm.scalar_count = next + static_cast<int>(mesh.cells.size());
  return vm;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplets>& per_cell) {
  std::size_t total = 0;
  for (const auto& t : per_cell) total += t.size();
  Triplets all;
  all.reserve(total);
  for (const auto& t : per_cell) all.insert(all.end(), t.begin(), t.end());
  SparseMatrix m(rows, cols);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return m;
}

// Local index l = 4 * comp + a for the 8 vector basis functions of a cell.
constexpr int kLocal = 8;

}  // namespace

DiscreteSaddle assemble_stokes(const GradedMesh& mesh, double pressure_weight_exponent) {
  const VelocityMap vm = velocity_map(mesh, true);
  const int nv = 2 * vm.scalar_count;
  const int np = static_cast<int>(mesh.vertices.size());
  const std::size_t nc = mesh.cells.size();
  std::vector<Triplets> ta(nc), tb(nc), tw(nc), tm(nc);

  parallel_for(nc, [&](std::size_t c) {
    const auto sh = shapes_on(mesh, c, cell_rule());
    std::array<std::array<double, 4>, 4> stiff{}, mass{};
    std::array<std::array<std::array<double, 2>, 4>, 3> div{};  // [pressure i][basis a][comp]
    std::array<std::array<double, 3>, 3> pm{}, pw{};
    for (const ShapeAt& s : sh) {
      const double om = weight_at(s.x, s.y, pressure_weight_exponent);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          stiff[a][b] += s.w * (s.grad[a][0] * s.grad[b][0] + s.grad[a][1] * s.grad[b][1]);
          mass[a][b] += s.w * s.val[a] * s.val[b];
        }
      for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 4; ++a)
          for (int d = 0; d < 2; ++d) div[i][a][d] += s.w * s.val[i] * s.grad[a][d];
        for (int j = 0; j < 3; ++j) {
          pm[i][j] += s.w * s.val[i] * s.val[j];
          pw[i][j] += s.w * om * s.val[i] * s.val[j];
        }
      }
    }
    for (int l = 0; l < kLocal; ++l) {
      const int a = l % 4, ca = l / 4;
      const int ga = vm.dof(mesh, c, a, ca);
      if (ga < 0) continue;
      for (int r = 0; r < kLocal; ++r) {
        const int b = r % 4, cb = r / 4;
        if (ca != cb) continue;
        const int gb = vm.dof(mesh, c, b, cb);
        if (gb < 0) continue;
        ta[c].emplace_back(ga, gb, stiff[a][b] + mass[a][b]);
      }
      for (int i = 0; i < 3; ++i) tb[c].emplace_back(mesh.cells[c][i], ga, div[i][a][ca]);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        tm[c].emplace_back(mesh.cells[c][i], mesh.cells[c][j], pm[i][j]);
        tw[c].emplace_back(mesh.cells[c][i], mesh.cells[c][j], pw[i][j]);
      }
  });

  DiscreteSaddle out;
  out.A = from_triplets(nv, nv, ta);
  out.B = from_triplets(np, nv, tb);
  out.M = from_triplets(np, np, tm);
  out.M_omega = from_triplets(np, np, tw);
  out.weight_exponent = pressure_weight_exponent;
  return out;
}

namespace {

bool ball_inside(const CuspDomain& domain, const Ball2& ball) {
  if (!(ball.radius > 0.0)) return false;
  for (int i = 0; i < 720; ++i) {
    const double t = 2.0 * 3.14159265358979323846 * i / 720.0;
    const Point pt(ball.center[0] + ball.radius * std::cos(t), {ball.center[1] + ball.radius * std::sin(t)});
    if (!contains(domain, pt)) return false;
  }
  return contains(domain, Point(ball.center[0], {ball.center[1]}));
}

// 4^depth congruent sub-triangles of the reference triangle as (scale, l1 offset, l2 offset).
// Each is described so that the map (l1, l2) -> offset + scale (l1, l2) is orientation
// preserving; the "upside down" pieces use a negative scale on both axes.
void subdivide(std::vector<std::array<double, 3>>& out, double s, double o1, double o2, int depth) {
  if (depth == 0) {
    out.push_back({s, o1, o2});
    return;
  }
  const double h = 0.5 * s;
  subdivide(out, h, o1, o2, depth - 1);
  subdivide(out, h, o1 + h, o2, depth - 1);
  subdivide(out, h, o1, o2 + h, depth - 1);
  subdivide(out, -h, o1 + h, o2 + h, depth - 1);
}

}  // namespace

KornSystem assemble_korn(const GradedMesh& mesh, const KornWeights& weights, const Ball2& ball) {
  if (!ball_inside(mesh.domain, ball) || ball.center[0] - ball.radius <= mesh.eps_mesh)
    throw ParameterError("assemble_korn: the ball must lie inside the meshed domain");
  const VelocityMap vm = velocity_map(mesh, false);
  const int nv = 2 * vm.scalar_count;
  const std::size_t nc = mesh.cells.size();
  std::vector<Triplets> t1(nc), t2(nc);

  static const TriRule fine = collapsed_rule(3);
  std::vector<std::array<double, 3>> pieces;
  subdivide(pieces, 1.0, 0.0, 0.0, 3);

  parallel_for(nc, [&](std::size_t c) {
    const auto sh = shapes_on(mesh, c, cell_rule());
    std::array<std::array<double, kLocal>, kLocal> k1{}, k2{};
    for (const ShapeAt& s : sh) {
      const double wg = weight_at(s.x, s.y, weights.grad_exponent);
      const double ws = weight_at(s.x, s.y, weights.sym_exponent);
      for (int l = 0; l < kLocal; ++l) {
        const int a = l % 4, ca = l / 4;
        for (int r = 0; r < kLocal; ++r) {
          const int b = r % 4, cb = r / 4;
          const double gg = s.grad[a][0] * s.grad[b][0] + s.grad[a][1] * s.grad[b][1];
          // eps(phi_a e_ca) : eps(phi_b e_cb)
          const double ee = 0.5 * ((ca == cb ? gg : 0.0) + s.grad[a][cb] * s.grad[b][ca]);
          if (ca == cb) k2[l][r] += s.w * wg * gg;
          k1[l][r] += s.w * ws * ee;
        }
      }
    }
    // Ball mass: indicator integrated on subdivided cells near the ball.
    double dmin = 1e300;
    double diam = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& p = mesh.vertices[mesh.cells[c][i]];
      dmin = std::min(dmin, std::hypot(p[0] - ball.center[0], p[1] - ball.center[1]));
      const auto& q = mesh.vertices[mesh.cells[c][(i + 1) % 3]];
      diam = std::max(diam, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
    if (dmin < ball.radius + diam) {
      for (const auto& piece : pieces) {
        for (const ShapeAt& s : shapes_on(mesh, c, fine, &piece)) {
          if (std::hypot(s.x - ball.center[0], s.y - ball.center[1]) >= ball.radius) continue;
          for (int l = 0; l < kLocal; ++l)
            for (int r = 0; r < kLocal; ++r)
              if (l / 4 == r / 4) k1[l][r] += std::abs(s.w) * s.val[l % 4] * s.val[r % 4];
        }
      }
    }
    for (int l = 0; l < kLocal; ++l) {
      const int gl = vm.dof(mesh, c, l % 4, l / 4);
      for (int r = 0; r < kLocal; ++r) {
        const int gr = vm.dof(mesh, c, r % 4, r / 4);
        t1[c].emplace_back(gl, gr, k1[l][r]);
        if (k2[l][r] != 0.0) t2[c].emplace_back(gl, gr, k2[l][r]);
      }
    }
  });
  return {from_triplets(nv, nv, t1), from_triplets(nv, nv, t2)};
}

}  // namespace cusplab
