#pragma once

#include <vector>

#include "affeig/body.hpp"
#include "affeig/directions.hpp"
#include "affeig/grid.hpp"
#include "affeig/p1.hpp"

namespace affeig {

// |t|^p and sign(t)|t|^{p-1} with branch-free fast paths for common exponents.
class Power {
 public:
  explicit Power(double p);
  double p() const { return p_; }
  double abs_pow(double t) const;
  double signed_pow_m1(double t) const;
  // |t|^{p-2}, regularized as (t^2 + eps2)^{(p-2)/2}.
  double curvature(double t, double eps2) const;
  // x^{1/p} for x >= 0.
  double root(double x) const;

 private:
  enum class Kind { One, ThreeHalves, Two, Three, General };
  double p_;
  Kind kind_;
};

// Directional norms, energy and flux of the affine energy on a P1 mesh.
// Works on the half set k < M/2; opposite directions carry the same norm.
class AffineKernel {
 public:
  AffineKernel(const DirectionSet& dirs, double p, double triangle_area);

  int half() const { return half_; }
  const DirectionSet& directions() const { return dirs_; }
  double p() const { return pow_.p(); }

  // ||grad_xi f||_p^p for every half-set direction.
  void norms_pow(const std::vector<Vec2>& g, std::vector<double>& out) const;
  // Affine energy from the p-th powers of the directional norms.
  double energy(const std::vector<double>& npow) const;
  // Per-direction weights c^{-n} E^{p+n} * 2 w_k N_k^{-n-p}.
  std::vector<double> direction_weights(const std::vector<double>& npow, double energy) const;
  // Gradient of H^p / p evaluated at every triangle gradient.
  void flux(const std::vector<Vec2>& g, const std::vector<double>& weights, std::vector<Vec2>& out) const;
  // Hessian of H^p / p at every triangle gradient (body held fixed).
  void hessians(const std::vector<Vec2>& g, const std::vector<double>& weights, double eps2,
                std::vector<Mat2>& out) const;

 private:
  DirectionSet dirs_;
  Power pow_;
  double area_;
  int half_;
  double c_;
};

struct EnergyBreakdown {
  double p = 0.0;
  std::vector<double> directional_norms;  // one per node of the direction set
  double energy = 0.0;
  double grad_norm = 0.0;
  double lp_norm = 0.0;
};

double lp_norm(const GridFunction& f, double p);
double grad_norm(const GridFunction& f, double p);
double directional_norm(const GridFunction& f, Vec2 xi, double p);
EnergyBreakdown affine_energy(const GridFunction& f, double p, const DirectionSet& dirs);

struct LBody {
  ConvexBody polar_form;  // support = directional norms
  double volume = 0.0;    // volume of the unit ball of the gauge xi -> ||grad_xi f||_p
  double energy_from_volume = 0.0;
};
LBody body_L(const GridFunction& f, double p, const DirectionSet& dirs);

double rayleigh_classical(const GridFunction& f, double p);
double rayleigh_affine(const GridFunction& f, double p, const DirectionSet& dirs);

double distribution_function(const GridFunction& f, double t);

}  // namespace affeig
