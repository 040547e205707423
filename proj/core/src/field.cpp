#include "cusplab/field.hpp"

#include <cmath>
#include <sstream>

namespace cusplab {

Coords Point::coords() const {
  Coords c;
  c.push_back(x);
  c.insert(c.end(), y.begin(), y.end());
  c.insert(c.end(), z.begin(), z.end());
  return c;
}

Point Point::from_coords(const Coords& c, std::size_t k) {
  Point p;
  p.x = c[0];
  p.y.assign(c.begin() + 1, c.begin() + 1 + static_cast<std::ptrdiff_t>(k));
  p.z.assign(c.begin() + 1 + static_cast<std::ptrdiff_t>(k), c.end());
  return p;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "(x=" << x;
  for (std::size_t i = 0; i < y.size(); ++i) os << ", y" << i + 1 << "=" << y[i];
  for (std::size_t i = 0; i < z.size(); ++i) os << ", z" << i + 1 << "=" << z[i];
  os << ")";
  return os.str();
}

double norm(const Coords& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

ScalarField constant_field(double c) {
  return ScalarField([c](const Point&) { return c; },
                     [](const Point& p) { return Coords(p.dim(), 0.0); });
}

}  // namespace cusplab
