#pragma once

#include <vector>

#include "affeig/vec2.hpp"

namespace affeig {

// Equally spaced unit vectors on the circle with trapezoid weights 2*pi/M.
class DirectionSet {
 public:
  DirectionSet() = default;
  static DirectionSet uniform(int count);

  int dimension() const { return 2; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Vec2& node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }
  double angle(int i) const { return angles_[i]; }
  int opposite(int i) const { return (i + size() / 2) % size(); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const;

  // Index of the node nearest to the given angle.
  int nearest(double angle) const;

  bool operator==(const DirectionSet& o) const { return size() == o.size(); }

 private:
  std::vector<Vec2> nodes_;
  std::vector<double> weights_;
  std::vector<double> angles_;
};

}  // namespace affeig
