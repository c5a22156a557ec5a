#pragma once

#include <variant>
#include <vector>

#include "affeig/directions.hpp"
#include "affeig/shape.hpp"
#include "affeig/vec2.hpp"

namespace affeig {

// Exact description of a body between samples, used for off-grid support queries.
struct PolygonalModel {
  std::vector<Vec2> vertices;  // convex, counterclockwise, origin interior
};
struct QuadraticModel {
  Mat2 gram;  // h(v) = sqrt(v^T gram v)
};
struct ZonoidModel {
  double p = 1.0;
  std::vector<Vec2> generators;  // h(v)^p = sum |<v, u>|^p
};
using SupportModel = std::variant<PolygonalModel, QuadraticModel, ZonoidModel>;

// Origin-symmetric planar convex body sampled on a DirectionSet.
class ConvexBody {
 public:
  ConvexBody() = default;

  // Circumscribed polygon of the support samples; radial samples by the min formula.
  static ConvexBody from_support(const DirectionSet& dirs, std::vector<double> support);
  // Convex hull of the radial points; support samples by the discrete max formula.
  static ConvexBody from_radial(const DirectionSet& dirs, std::vector<double> radial);
  static ConvexBody ball(const DirectionSet& dirs, double radius = 1.0);
  static ConvexBody ellipse(const DirectionSet& dirs, const Mat2& gram);
  static ConvexBody lp_zonoid(const DirectionSet& dirs, double p, std::vector<Vec2> generators);
  // Shape translated so that its centroid sits at the origin; must be symmetric about it.
  static ConvexBody from_shape(const DirectionSet& dirs, const ShapeSpec& shape);

  const DirectionSet& directions() const { return dirs_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& radial() const { return radial_; }
  const SupportModel& model() const { return model_; }

  double support_at(Vec2 v) const;
  Vec2 support_gradient(Vec2 v) const;
  // h(v)^{p-1} grad h(v), zero at v = 0.
  Vec2 flux(Vec2 v, double p) const;

  ConvexBody transformed(const Mat2& a) const;
  ConvexBody scaled(double s) const { return transformed(Mat2::diag(s, s)); }
  ConvexBody polar() const;

  // Checks, without repairing, that the support samples describe a convex body.
  bool samples_convex(double tol = 1e-9) const;

 private:
  ConvexBody(const DirectionSet& dirs, std::vector<double> support, std::vector<double> radial, SupportModel model);
  void validate() const;

  DirectionSet dirs_;
  std::vector<double> support_;
  std::vector<double> radial_;
  SupportModel model_;
};

ConvexBody polar_body(const ConvexBody& k);
// Polar-coordinate quadrature (1/2) sum w r^2 on the direction set.
double body_volume(const ConvexBody& k);
// Exact area of the polygonal or elliptic model; quadrature for zonoids.
double model_volume(const ConvexBody& k);
double santalo_product(const ConvexBody& k);
ConvexBody centroid_body(const ConvexBody& k, double p);
double busemann_petty_margin(const ConvexBody& k, double p);

// Support of the projection body: h(xi) = (1/2) sum_e |<nu_e, xi>| len_e.
double projection_support(const ShapeSpec& polygon, Vec2 xi);
ConvexBody projection_body(const ShapeSpec& polygon, const DirectionSet& dirs);
ConvexBody polar_projection_body(const ShapeSpec& polygon, const DirectionSet& dirs);
// Volume of the polar projection body integrated in closed form between kinks.
double polar_projection_volume(const ShapeSpec& polygon);

struct Position {
  Mat2 matrix;
  Vec2 translation;
  double volume = 0.0;
  double scale = 0.0;
  int angle_steps = 0, stretch_steps = 0, shear_steps = 0;
  double stretch_min = 0, stretch_max = 0, shear_min = 0, shear_max = 0;
};

// Grid search over rotation x stretch x shear with the largest feasible scale
// for each linear part; reports a lower bound on the maximal inscribed volume.
Position maximal_volume_position(const ShapeSpec& body, const ShapeSpec& container, int budget = 4096);

}  // namespace affeig
