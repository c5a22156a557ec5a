#pragma once

#include <cstdint>
#include <vector>

#include "affeig/grid.hpp"
#include "affeig/vec2.hpp"

namespace affeig {

// Piecewise-linear interpolation on the lattice: every cell is split along its
// anti-diagonal into a lower triangle (00, 10, 01) and an upper one (11, 01, 10).
// Triangle 2c is the lower and 2c + 1 the upper triangle of active cell c.
class P1Mesh {
 public:
  struct Cell {
    std::uint32_t n00, n10, n01, n11;
  };

  P1Mesh() = default;
  P1Mesh(const Lattice& lattice, const std::vector<std::uint8_t>& mask);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t triangle_count() const { return 2 * cells_.size(); }
  double triangle_area() const { return 0.5 * lattice_.h * lattice_.h; }
  double node_mass() const { return lattice_.h * lattice_.h; }

  void gradients(const std::vector<double>& values, std::vector<Vec2>& out) const;
  // out_i = sum_T area * <flux_T, grad phi_i>, zero outside the mask.
  void scatter(const std::vector<Vec2>& flux, std::vector<double>& out) const;
  // Nodes used by triangle t, in the order (vertex with the right angle, x-neighbour, y-neighbour).
  void triangle_nodes(std::size_t t, std::uint32_t nodes[3]) const;

 private:
  Lattice lattice_;
  std::vector<std::uint8_t> mask_;
  std::vector<Cell> cells_;
};

}  // namespace affeig
