#include "affeig/directions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "affeig/errors.hpp"

namespace affeig {

DirectionSet DirectionSet::uniform(int count) {
  if (count < 4 || count % 4 != 0)
    throw InvalidArgument("direction count must be a positive multiple of 4, got " + std::to_string(count));
  DirectionSet d;
  const double step = 2.0 * std::numbers::pi / count;
  const int quarter = count / 4;
  d.nodes_.resize(count);
  d.angles_.resize(count);
  d.weights_.assign(count, step);
  // Fill the first quadrant and rotate by exact quarter turns so that
  // opposite nodes are exact negatives of each other.
  for (int i = 0; i < quarter; ++i) {
    const Vec2 u = unit_at(i * step);
    d.nodes_[i] = u;
    d.nodes_[i + quarter] = {-u.y, u.x};
    d.nodes_[i + 2 * quarter] = {-u.x, -u.y};
    d.nodes_[i + 3 * quarter] = {u.y, -u.x};
  }
  for (int i = 0; i < count; ++i) d.angles_[i] = i * step;
  return d;
}

double DirectionSet::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

int DirectionSet::nearest(double angle) const {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0) a += two_pi;
  const int i = static_cast<int>(std::lround(a / (two_pi / size())));
  return i % size();
}

}  // namespace affeig
