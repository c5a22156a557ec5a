#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affeig/grid.hpp"
#include "affeig/shape.hpp"

namespace affeig {

// Smooth function vanishing on the boundary of a convex shape, normalized to max 1.
double bubble(const ShapeSpec& shape, Vec2 x);

// Names: bubble, cone, sine, linear, random:SEED.
GridFunction builtin_function(const std::string& name, const ShapeSpec& shape, double h);
std::vector<std::string> builtin_names();

// Random smooth positive bump on the shape: bubble times a sum of Gaussians.
GridFunction random_bump(const ShapeSpec& shape, double h, std::uint64_t seed);

// Rearranged values placed on the lattice nodes nearest to a node near the mask centroid.
GridFunction symmetric_rearrangement(const GridFunction& f);

// Domain of the divergence constructions: [0,1] x [0,2].
ShapeSpec unbounded_domain();
double unbounded_default_h();
// p = 1: indicator of [0,1] x [0,1/k]. p > 1: phi_k(x) sin(pi y / 2) with ramps of slope k.
GridFunction unbounded_sequence(int k, double p, double h = 1.0 / 192.0);

struct CorpusItem {
  std::string name;
  ShapeSpec shape;
  GridFunction f;
  double p;
};
// Fixed 50-function corpus for the comparison inequalities at exponent p.
std::vector<CorpusItem> comparison_corpus(double p, std::uint64_t seed, double h = 1.0 / 64.0);

}  // namespace affeig
