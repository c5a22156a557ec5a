#pragma once

#include <vector>

#include "affeig/body.hpp"
#include "affeig/energy.hpp"
#include "affeig/grid.hpp"
#include "affeig/p1.hpp"

namespace affeig {

// Everything the affine p-Laplacian needs about one function, computed once.
class OperatorContext {
 public:
  OperatorContext(const GridFunction& f, double p, const DirectionSet& dirs);

  const GridFunction& f() const { return f_; }
  double p() const { return p_; }
  const DirectionSet& directions() const { return dirs_; }
  const std::vector<double>& directional_norms() const { return norms_; }
  double energy() const { return energy_; }
  const P1Mesh& mesh() const { return mesh_; }
  const std::vector<Vec2>& element_gradients() const { return grads_; }
  // Weights of the half direction set in H^p(v) = sum_k mu_k |<xi_k, v>|^p.
  const std::vector<double>& direction_weights() const { return mu_; }
  // Gradient of H^p / p at each triangle gradient.
  const std::vector<Vec2>& flux() const { return flux_; }

 private:
  GridFunction f_;
  double p_;
  DirectionSet dirs_;
  P1Mesh mesh_;
  std::vector<Vec2> grads_;
  std::vector<double> norms_;
  double energy_;
  std::vector<double> mu_;
  std::vector<Vec2> flux_;
};

double H_value(const OperatorContext& ctx, Vec2 v);
Vec2 H_gradient(const OperatorContext& ctx, Vec2 v);
ConvexBody body_G(const OperatorContext& ctx);

// Weak-form operators divided by the lumped node mass h^2, zero outside the mask.
GridFunction wulff_laplacian(const GridFunction& f, const ConvexBody& k, double p);
GridFunction affine_laplacian(const OperatorContext& ctx);
GridFunction classical_p_laplacian(const GridFunction& f, double p);

// sum_T area <flux_T, grad psi_T>: (1/p) times the derivative of E^p at f along psi.
double weak_form_pairing(const OperatorContext& ctx, const GridFunction& psi);

// Normalized weak-form defect over hat functions centred on every 4th lattice node.
double el_residual(const OperatorContext& ctx, double lambda);
// Same defect for an arbitrary per-triangle flux (classical or affine).
double weak_defect(const P1Mesh& mesh, const std::vector<Vec2>& flux, const std::vector<double>& values, double p,
                   double lambda);

struct SelfPairing {
  double energy_term;  // pairing of the operator with psi = f
  double energy_p;     // E^p
  double mass_term;    // lambda * sum h^2 |f|^{p-2} f * f
  double mass_p;       // lambda * ||f||_p^p
};
SelfPairing el_self_pairing(const OperatorContext& ctx, double lambda);

}  // namespace affeig
