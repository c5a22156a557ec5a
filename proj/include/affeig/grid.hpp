#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "affeig/shape.hpp"
#include "affeig/vec2.hpp"

namespace affeig {

// Uniform lattice window: node (i, j) sits at origin + h * (i, j).
struct Lattice {
  double h = 0.0;
  Vec2 origin;
  int nx = 0;
  int ny = 0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Vec2 point(int i, int j) const { return {origin.x + h * i, origin.y + h * j}; }
  bool operator==(const Lattice&) const = default;
};

// Window of lattice-aligned nodes (integer multiples of h) covering the shape with one
// exterior layer on every side.
Lattice lattice_for(const ShapeSpec& shape, double h);
// Node is interior iff it lies strictly inside the shape.
std::vector<std::uint8_t> mask_for(const ShapeSpec& shape, const Lattice& lattice);

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Lattice lattice, std::vector<std::uint8_t> mask, std::vector<double> values);

  static GridFunction zeros(const ShapeSpec& shape, double h);
  template <class F>
  static GridFunction sample(const ShapeSpec& shape, double h, F&& fn) {
    GridFunction g = zeros(shape, h);
    for (int j = 0; j < g.lattice_.ny; ++j)
      for (int i = 0; i < g.lattice_.nx; ++i) {
        const std::size_t k = g.lattice_.index(i, j);
        if (g.mask_[k]) g.values_[k] = fn(g.lattice_.point(i, j));
      }
    return g;
  }

  const Lattice& lattice() const { return lattice_; }
  double h() const { return lattice_.h; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<double>& values() const { return values_; }
  double at(int i, int j) const { return values_[lattice_.index(i, j)]; }
  std::size_t interior_count() const;
  bool is_zero() const;

  // Same lattice and mask, new values (zeroed outside the mask).
  GridFunction with_values(std::vector<double> values) const;
  GridFunction scaled(double s) const;
  GridFunction abs() const;

  // Characteristic functions of polygons carry the polygon so that p = 1 quantities
  // can use exact edge data.
  const std::optional<ShapeSpec>& indicator() const { return indicator_; }
  void set_indicator(ShapeSpec polygon) { indicator_ = std::move(polygon); }

 private:
  Lattice lattice_;
  std::vector<std::uint8_t> mask_;
  std::vector<double> values_;
  std::optional<ShapeSpec> indicator_;
};

struct VectorField {
  Lattice lattice;
  std::vector<Vec2> values;
};

// Nodal gradient: central differences, one-sided next to the mask boundary, zero outside.
VectorField gradient(const GridFunction& f);

}  // namespace affeig
