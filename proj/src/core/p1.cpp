#include "affeig/p1.hpp"

#include "affeig/parallel.hpp"

namespace affeig {

P1Mesh::P1Mesh(const Lattice& lattice, const std::vector<std::uint8_t>& mask) : lattice_(lattice), mask_(mask) {
  for (int j = 0; j + 1 < lattice.ny; ++j)
    for (int i = 0; i + 1 < lattice.nx; ++i) {
      Cell c{static_cast<std::uint32_t>(lattice.index(i, j)), static_cast<std::uint32_t>(lattice.index(i + 1, j)),
             static_cast<std::uint32_t>(lattice.index(i, j + 1)), static_cast<std::uint32_t>(lattice.index(i + 1, j + 1))};
      if (mask[c.n00] || mask[c.n10] || mask[c.n01] || mask[c.n11]) cells_.push_back(c);
    }
}

void P1Mesh::gradients(const std::vector<double>& v, std::vector<Vec2>& out) const {
  out.resize(triangle_count());
  const double inv = 1.0 / lattice_.h;
  parallel_for(cells_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const Cell& q = cells_[c];
      const double f00 = v[q.n00], f10 = v[q.n10], f01 = v[q.n01], f11 = v[q.n11];
      out[2 * c] = {(f10 - f00) * inv, (f01 - f00) * inv};
      out[2 * c + 1] = {(f11 - f01) * inv, (f11 - f10) * inv};
    }
  }, 4096);
}

void P1Mesh::scatter(const std::vector<Vec2>& flux, std::vector<double>& out) const {
  out.assign(lattice_.size(), 0.0);
  const double k = triangle_area() / lattice_.h;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Cell& q = cells_[c];
    const Vec2 lo = flux[2 * c], up = flux[2 * c + 1];
    out[q.n00] += k * (-lo.x - lo.y);
    out[q.n10] += k * lo.x;
    out[q.n01] += k * lo.y;
    out[q.n11] += k * (up.x + up.y);
    out[q.n01] -= k * up.x;
    out[q.n10] -= k * up.y;
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask_[i]) out[i] = 0.0;
}

void P1Mesh::triangle_nodes(std::size_t t, std::uint32_t nodes[3]) const {
  const Cell& q = cells_[t / 2];
  if (t % 2 == 0) {
    nodes[0] = q.n00; nodes[1] = q.n10; nodes[2] = q.n01;
  } else {
    nodes[0] = q.n11; nodes[1] = q.n01; nodes[2] = q.n10;
  }
}

}  // namespace affeig
