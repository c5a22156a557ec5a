#include "affeig/grid.hpp"

#include <cmath>

#include "affeig/errors.hpp"

namespace affeig {

Lattice lattice_for(const ShapeSpec& shape, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("grid spacing must be positive");
  const Box b = shape.bounding_box();
  const int i0 = static_cast<int>(std::floor(b.lo.x / h)) - 1;
  const int j0 = static_cast<int>(std::floor(b.lo.y / h)) - 1;
  const int i1 = static_cast<int>(std::ceil(b.hi.x / h)) + 1;
  const int j1 = static_cast<int>(std::ceil(b.hi.y / h)) + 1;
  const double cells = (static_cast<double>(i1) - i0 + 1) * (static_cast<double>(j1) - j0 + 1);
  if (cells > 4e7) throw InvalidArgument("grid too fine for the shape (over 4e7 nodes)");
  return {h, {i0 * h, j0 * h}, i1 - i0 + 1, j1 - j0 + 1};
}

std::vector<std::uint8_t> mask_for(const ShapeSpec& shape, const Lattice& lattice) {
  std::vector<std::uint8_t> m(lattice.size(), 0);
  for (int j = 0; j < lattice.ny; ++j)
    for (int i = 0; i < lattice.nx; ++i) m[lattice.index(i, j)] = shape.contains(lattice.point(i, j)) ? 1 : 0;
  // The outermost ring always stays exterior.
  for (int i = 0; i < lattice.nx; ++i) m[lattice.index(i, 0)] = m[lattice.index(i, lattice.ny - 1)] = 0;
  for (int j = 0; j < lattice.ny; ++j) m[lattice.index(0, j)] = m[lattice.index(lattice.nx - 1, j)] = 0;
  return m;
}

GridFunction::GridFunction(Lattice lattice, std::vector<std::uint8_t> mask, std::vector<double> values)
    : lattice_(lattice), mask_(std::move(mask)), values_(std::move(values)) {
  if (!(lattice_.h > 0.0)) throw InvalidArgument("grid spacing must be positive");
  if (lattice_.nx < 3 || lattice_.ny < 3) throw InvalidArgument("lattice window must be at least 3x3");
  if (mask_.size() != lattice_.size() || values_.size() != lattice_.size())
    throw InvalidArgument("mask/values size does not match the lattice");
  for (int i = 0; i < lattice_.nx; ++i) mask_[lattice_.index(i, 0)] = mask_[lattice_.index(i, lattice_.ny - 1)] = 0;
  for (int j = 0; j < lattice_.ny; ++j) mask_[lattice_.index(0, j)] = mask_[lattice_.index(lattice_.nx - 1, j)] = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!mask_[k]) values_[k] = 0.0;
    else if (!std::isfinite(values_[k])) throw InvalidArgument("function value is not finite");
  }
}

GridFunction GridFunction::zeros(const ShapeSpec& shape, double h) {
  const Lattice l = lattice_for(shape, h);
  return GridFunction(l, mask_for(shape, l), std::vector<double>(l.size(), 0.0));
}

std::size_t GridFunction::interior_count() const {
  std::size_t n = 0;
  for (auto m : mask_) n += m;
  return n;
}

bool GridFunction::is_zero() const {
  for (double v : values_)
    if (v != 0.0) return false;
  return true;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(lattice_, mask_, std::move(values));
}

GridFunction GridFunction::scaled(double s) const {
  GridFunction g = *this;
  for (double& v : g.values_) v *= s;
  return g;
}

GridFunction GridFunction::abs() const {
  GridFunction g = *this;
  for (double& v : g.values_) v = std::abs(v);
  return g;
}

VectorField gradient(const GridFunction& f) {
  const Lattice& l = f.lattice();
  const auto& m = f.mask();
  VectorField out{l, std::vector<Vec2>(l.size())};
  const double h = l.h;
  for (int j = 1; j + 1 < l.ny; ++j)
    for (int i = 1; i + 1 < l.nx; ++i) {
      const std::size_t k = l.index(i, j);
      if (!m[k]) continue;
      auto partial = [&](std::size_t back, std::size_t fwd) {
        // One-sided toward the interior when a neighbour lies outside the mask.
        const bool bi = m[back], fi = m[fwd];
        if (bi && fi) return (f.values()[fwd] - f.values()[back]) / (2.0 * h);
        if (fi) return (f.values()[fwd] - f.values()[k]) / h;
        if (bi) return (f.values()[k] - f.values()[back]) / h;
        return (f.values()[fwd] - f.values()[back]) / (2.0 * h);
      };
      out.values[k] = {partial(l.index(i - 1, j), l.index(i + 1, j)), partial(l.index(i, j - 1), l.index(i, j + 1))};
    }
  return out;
}

}  // namespace affeig
