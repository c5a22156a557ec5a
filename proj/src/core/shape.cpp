#include "affeig/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "affeig/directions.hpp"
#include "affeig/errors.hpp"

namespace affeig {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
  return 0.5 * s;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

double segment_distance(Vec2 x, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double t = std::clamp(dot(x - a, e) / dot(e, e), 0.0, 1.0);
  return norm(x - (a + e * t));
}

bool is_spd(const Mat2& m) {
  return std::abs(m.b - m.c) <= 1e-12 * (std::abs(m.a) + std::abs(m.d)) && m.a > 0 && m.det() > 0;
}

}  // namespace

ShapeSpec ShapeSpec::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidArgument("polygon vertex is not finite");
  const double a = signed_area(vertices);
  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, norm(v - vertices[0]));
  if (!(std::abs(a) > 1e-14 * scale * scale)) throw InvalidArgument("polygon has degenerate area");
  if (a < 0) throw InvalidArgument("polygon vertices must be in counterclockwise order");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
        throw InvalidArgument("polygon is not simple");
    }
  ShapeSpec s;
  s.kind_ = Kind::Polygon;
  s.vertices_ = std::move(vertices);
  return s;
}

ShapeSpec ShapeSpec::ellipse(const Mat2& matrix, Vec2 center) {
  if (!is_spd(matrix)) throw InvalidArgument("ellipse matrix must be symmetric positive definite");
  ShapeSpec s;
  s.kind_ = Kind::Ellipse;
  s.matrix_ = {matrix.a, 0.5 * (matrix.b + matrix.c), 0.5 * (matrix.b + matrix.c), matrix.d};
  s.center_ = center;
  return s;
}

ShapeSpec ShapeSpec::disk(double radius, Vec2 center) {
  if (!(radius > 0)) throw InvalidArgument("disk radius must be positive");
  return ellipse(Mat2::diag(radius, radius), center);
}

ShapeSpec ShapeSpec::rectangle(Vec2 lo, Vec2 hi) {
  return polygon({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
}

ShapeSpec ShapeSpec::regular_polygon(int count, double circumradius, double phase, Vec2 center) {
  if (count < 3) throw InvalidArgument("regular polygon needs at least 3 vertices");
  std::vector<Vec2> v(count);
  for (int i = 0; i < count; ++i) v[i] = center + unit_at(phase + 2.0 * kPi * i / count) * circumradius;
  return polygon(std::move(v));
}

double ShapeSpec::area() const {
  if (is_ellipse()) return kPi * matrix_.det();
  return signed_area(vertices_);
}

double ShapeSpec::perimeter() const {
  if (is_ellipse()) {
    // Semi-axes are the eigenvalues of the symmetric matrix.
    const double m = 0.5 * matrix_.trace();
    const double r = std::sqrt(std::max(0.0, m * m - matrix_.det()));
    const double a = m + r, b = m - r;
    const double e = std::sqrt(std::max(0.0, 1.0 - (b * b) / (a * a)));
    return 4.0 * a * std::comp_ellint_2(e);
  }
  double s = 0.0;
  for (std::size_t i = 0, n = vertices_.size(); i < n; ++i) s += norm(vertices_[(i + 1) % n] - vertices_[i]);
  return s;
}

Vec2 ShapeSpec::centroid() const {
  if (is_ellipse()) return center_;
  Vec2 c;
  double a = 0.0;
  for (std::size_t i = 0, n = vertices_.size(); i < n; ++i) {
    const Vec2 p = vertices_[i], q = vertices_[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  return c / (3.0 * a);
}

Box ShapeSpec::bounding_box() const {
  if (is_ellipse()) {
    const double wx = std::hypot(matrix_.a, matrix_.b), wy = std::hypot(matrix_.c, matrix_.d);
    return {{center_.x - wx, center_.y - wy}, {center_.x + wx, center_.y + wy}};
  }
  Box b{vertices_[0], vertices_[0]};
  for (const auto& v : vertices_) {
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
  }
  return b;
}

bool ShapeSpec::is_convex() const {
  if (is_ellipse()) return true;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i], b = vertices_[(i + 1) % n], c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12 * norm(b - a) * norm(c - b)) return false;
  }
  return true;
}

bool ShapeSpec::contains(Vec2 x) const {
  if (is_ellipse()) {
    const Vec2 u = matrix_.inverse() * (x - center_);
    return dot(u, u) < 1.0 - 1e-12;
  }
  const Box b = bounding_box();
  const double tol = 1e-12 * std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = vertices_[i], c = vertices_[j];
    if (segment_distance(x, a, c) <= tol) return false;
    if ((a.y > x.y) != (c.y > x.y)) {
      const double xc = a.x + (x.y - a.y) * (c.x - a.x) / (c.y - a.y);
      if (x.x < xc) inside = !inside;
    }
  }
  return inside;
}

double ShapeSpec::support(Vec2 u) const {
  if (is_ellipse()) return dot(u, center_) + norm(matrix_ * u);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) m = std::max(m, dot(u, v));
  return m;
}

double ShapeSpec::ray_exit(Vec2 origin, Vec2 unit) const {
  if (is_ellipse()) {
    const Mat2 inv = matrix_.inverse();
    const Vec2 a = inv * unit, b = inv * (origin - center_);
    const double qa = dot(a, a), qb = 2.0 * dot(a, b), qc = dot(b, b) - 1.0;
    return (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  }
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i], e = vertices_[(i + 1) % n] - a;
    const double den = cross(unit, e);
    if (den == 0.0) continue;
    const double t = cross(a - origin, e) / den;
    const double s = cross(a - origin, unit) / den;
    if (t > 0 && s >= -1e-14 && s <= 1 + 1e-14) best = std::min(best, t);
  }
  return best;
}

ShapeSpec ShapeSpec::polygonize(int count) const {
  if (is_polygon()) return *this;
  if (count < 3) throw InvalidArgument("polygonize needs at least 3 vertices");
  std::vector<Vec2> v(count);
  for (int i = 0; i < count; ++i) v[i] = center_ + matrix_ * unit_at(2.0 * kPi * i / count);
  return polygon(std::move(v));
}

ShapeSpec ShapeSpec::transformed(const Mat2& a, Vec2 t) const {
  const double det = a.det();
  if (!(std::abs(det) > 1e-14) || !std::isfinite(det)) throw InvalidArgument("linear map is singular");
  if (is_ellipse()) {
    const Mat2 am = a * matrix_;
    return ellipse(sqrt_spd(am * am.transpose()), a * center_ + t);
  }
  std::vector<Vec2> v;
  v.reserve(vertices_.size());
  for (const auto& x : vertices_) v.push_back(a * x + t);
  if (det < 0) std::reverse(v.begin(), v.end());
  return polygon(std::move(v));
}

ShapeSpec apply_linear(const ShapeSpec& shape, const Mat2& a, Vec2 t) { return shape.transformed(a, t); }

double max_width(const ShapeSpec& shape, int direction_count) {
  const auto dirs = DirectionSet::uniform(direction_count);
  double m = 0.0;
  for (int i = 0; i < dirs.size() / 2; ++i) m = std::max(m, shape.width(dirs.node(i)));
  return m;
}

}  // namespace affeig
