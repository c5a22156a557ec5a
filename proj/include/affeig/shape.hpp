#pragma once

#include <vector>

#include "affeig/vec2.hpp"

namespace affeig {

struct Box {
  Vec2 lo;
  Vec2 hi;
};

// Planar domain: a simple counterclockwise polygon or an ellipse
// {center + M u : |u| <= 1} with M symmetric positive definite.
class ShapeSpec {
 public:
  enum class Kind { Polygon, Ellipse };

  static ShapeSpec polygon(std::vector<Vec2> vertices);
  static ShapeSpec ellipse(const Mat2& matrix, Vec2 center = {});
  static ShapeSpec disk(double radius, Vec2 center = {});
  static ShapeSpec rectangle(Vec2 lo, Vec2 hi);
  static ShapeSpec regular_polygon(int count, double circumradius, double phase = 0.0, Vec2 center = {});

  Kind kind() const { return kind_; }
  bool is_polygon() const { return kind_ == Kind::Polygon; }
  bool is_ellipse() const { return kind_ == Kind::Ellipse; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Mat2& matrix() const { return matrix_; }
  const Vec2& center() const { return center_; }

  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  Box bounding_box() const;
  bool is_convex() const;

  // Strict interior test; points within a relative 1e-12 of the boundary count as outside.
  bool contains(Vec2 x) const;
  // max over the shape (convex hull for polygons) of <u, x>.
  double support(Vec2 u) const;
  double width(Vec2 unit) const { return support(unit) + support(-unit); }
  // Distance along the ray from an interior point to the boundary (convex shapes).
  double ray_exit(Vec2 origin, Vec2 unit) const;

  // Inscribed polygon; ellipses are sampled at equal parameter angles.
  ShapeSpec polygonize(int count) const;
  ShapeSpec transformed(const Mat2& a, Vec2 t = {}) const;

 private:
  Kind kind_ = Kind::Polygon;
  std::vector<Vec2> vertices_;
  Mat2 matrix_;
  Vec2 center_;
};

ShapeSpec apply_linear(const ShapeSpec& shape, const Mat2& a, Vec2 t = {});
double max_width(const ShapeSpec& shape, int direction_count = 1024);

}  // namespace affeig
