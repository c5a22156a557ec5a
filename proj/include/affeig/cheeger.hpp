#pragma once

#include <string>
#include <vector>

#include "affeig/body.hpp"
#include "affeig/shape.hpp"

namespace affeig {

// perimeter / area.
double classical_cheeger_ratio(const ShapeSpec& set);

// Affine energy of the characteristic function divided by the area. Ellipses are
// replaced by inscribed polygons with the given vertex count.
double affine_cheeger_ratio(const ShapeSpec& set, int ellipse_vertices = 256);

// |ratio(A C) - |det A|^{-1/2} ratio(C)| relative to the predicted value.
double det_scaling_defect(const ShapeSpec& set, const Mat2& a, int ellipse_vertices = 256);

enum class CandidateFamily { Disk, Ellipse, RoundedSquare, AffineTemplate, All };
const char* to_string(CandidateFamily f);
CandidateFamily parse_family(const std::string& s);

// Square [-1,1]^2 with corners rounded to the given radius in [0, 1].
ShapeSpec rounded_square(double radius, int arc_vertices = 64);

struct CheegerCandidate {
  ShapeSpec set;
  std::string family;
  std::vector<double> params;  // family parameters of the template
  Vec2 center;
  double scale = 0.0;
  double perimeter = 0.0;
  double classical_ratio = 0.0;
  double affine_ratio = 0.0;
};

struct CheegerOptions {
  CandidateFamily family = CandidateFamily::All;
  int budget = 2048;
  int ellipse_vertices = 256;
  // Relative slack allowed between the winner's area and the best affine image found.
  double position_tolerance = 0.02;
};

struct CheegerReport {
  CheegerCandidate classical_best;
  CheegerCandidate affine_best;
  int evaluated = 0;
  Position position;       // best affine image of the affine winner inside the domain
  double position_ratio = 0.0;  // winner area / position volume
  bool position_ok = false;
};

// Largest scaled and translated copies of each family template inside a convex domain.
CheegerReport cheeger_search(const ShapeSpec& domain, const CheegerOptions& opts = {});

}  // namespace affeig
