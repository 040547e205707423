#pragma once

#include <boost/container/static_vector.hpp>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

namespace cusplab {

/// Largest ambient dimension handled anywhere in the library (base + lifted).
inline constexpr std::size_t kMaxDim = 6;

/// Small inline coordinate / value vector; never allocates.
using Coords = boost::container::static_vector<double, kMaxDim>;

/// Row-major Jacobian: jac[j][i] = d u_j / d x_i.
using Jacobian = boost::container::static_vector<Coords, kMaxDim>;

/// A point of R^n split as (x, y, z) with x the cusp axis, y in R^k the
/// cross-section and z in R^m the coordinates along the cusp set.
struct Point {
  double x = 0.0;
  Coords y;
  Coords z;

  Point() = default;
  Point(double x_, std::initializer_list<double> y_, std::initializer_list<double> z_ = {})
      : x(x_), y(y_), z(z_) {}
  Point(double x_, Coords y_, Coords z_) : x(x_), y(std::move(y_)), z(std::move(z_)) {}

  [[nodiscard]] std::size_t dim() const { return 1 + y.size() + z.size(); }

  /// Coordinate i in (x, y_1..y_k, z_1..z_m) order.
  [[nodiscard]] double operator[](std::size_t i) const {
    if (i == 0) return x;
    if (i <= y.size()) return y[i - 1];
    return z[i - 1 - y.size()];
  }
  double& operator[](std::size_t i) {
    if (i == 0) return x;
    if (i <= y.size()) return y[i - 1];
    return z[i - 1 - y.size()];
  }

  [[nodiscard]] Coords coords() const;
  [[nodiscard]] static Point from_coords(const Coords& c, std::size_t k);

  [[nodiscard]] std::string to_string() const;
};

double norm(const Coords& v);

enum class Support {
  whole_domain,  ///< nonzero up to the boundary
  compact        ///< declared to vanish in a neighbourhood of the boundary
};

/// Real-valued field with an optional analytic gradient.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Coords(const Point&)> gradient;
  Support support = Support::whole_domain;

  ScalarField() = default;
  ScalarField(std::function<double(const Point&)> v,
              std::function<Coords(const Point&)> g = {},
              Support s = Support::whole_domain)
      : value(std::move(v)), gradient(std::move(g)), support(s) {}

  double operator()(const Point& p) const { return value(p); }
  [[nodiscard]] bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// Vector-valued field; `jacobian` is optional.
struct VectorField {
  std::function<Coords(const Point&)> value;
  std::function<Jacobian(const Point&)> jacobian;
  Support support = Support::whole_domain;

  Coords operator()(const Point& p) const { return value(p); }
  [[nodiscard]] bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

ScalarField constant_field(double c);

}  // namespace cusplab
