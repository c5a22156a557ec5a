#include "affeig/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affeig/constants.hpp"
#include "affeig/errors.hpp"
#include "affeig/parallel.hpp"

namespace affeig {

namespace {

GridFunction divergence_of(const GridFunction& f, const P1Mesh& mesh, const std::vector<Vec2>& flux) {
  std::vector<double> out;
  mesh.scatter(flux, out);
  const double inv_mass = 1.0 / mesh.node_mass();
  for (double& v : out) v *= inv_mass;
  return f.with_values(std::move(out));
}

}  // namespace

OperatorContext::OperatorContext(const GridFunction& f, double p, const DirectionSet& dirs)
    : f_(f), p_(p), dirs_(dirs), mesh_(f.lattice(), f.mask()) {
  if (!(p > 1.0)) throw InvalidArgument("operators need p > 1");
  const EnergyBreakdown e = affine_energy(f, p, dirs);
  norms_ = e.directional_norms;
  energy_ = e.energy;
  mesh_.gradients(f.values(), grads_);
  const AffineKernel kernel(dirs, p, mesh_.triangle_area());
  std::vector<double> npow(dirs.size() / 2);
  for (int k = 0; k < dirs.size() / 2; ++k) npow[k] = std::pow(norms_[k], p);
  mu_ = kernel.direction_weights(npow, energy_);
  kernel.flux(grads_, mu_, flux_);
}

double H_value(const OperatorContext& ctx, Vec2 v) {
  const Power pw(ctx.p());
  double s = 0.0;
  for (int k = 0; k < ctx.directions().size() / 2; ++k)
    s += ctx.direction_weights()[k] * pw.abs_pow(dot(ctx.directions().node(k), v));
  return pw.root(s);
}

Vec2 H_gradient(const OperatorContext& ctx, Vec2 v) {
  if (v.x == 0.0 && v.y == 0.0) return {};
  const Power pw(ctx.p());
  Vec2 g;
  for (int k = 0; k < ctx.directions().size() / 2; ++k) {
    const Vec2 xi = ctx.directions().node(k);
    g += xi * (ctx.direction_weights()[k] * pw.signed_pow_m1(dot(xi, v)));
  }
  return g * std::pow(H_value(ctx, v), 1.0 - ctx.p());
}

ConvexBody body_G(const OperatorContext& ctx) {
  const auto& dirs = ctx.directions();
  std::vector<double> radial(dirs.size());
  for (int i = 0; i < dirs.size(); ++i) radial[i] = 1.0 / ctx.directional_norms()[i];
  const ConvexBody l = ConvexBody::from_radial(dirs, radial);
  const double scale = std::sqrt(constants::unit_ball_volume(2) / body_volume(l));
  const ConvexBody gamma = centroid_body(l, ctx.p());
  return gamma.scaled(scale);
}

GridFunction wulff_laplacian(const GridFunction& f, const ConvexBody& k, double p) {
  if (!(p > 1.0)) throw InvalidArgument("Wulff Laplacian needs p > 1");
  const P1Mesh mesh(f.lattice(), f.mask());
  std::vector<Vec2> g, flux;
  mesh.gradients(f.values(), g);
  flux.resize(g.size());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) flux[t] = k.flux(g[t], p);
  }, 512);
  return divergence_of(f, mesh, flux);
}

GridFunction affine_laplacian(const OperatorContext& ctx) { return divergence_of(ctx.f(), ctx.mesh(), ctx.flux()); }

GridFunction classical_p_laplacian(const GridFunction& f, double p) {
  if (!(p > 1.0)) throw InvalidArgument("p-Laplacian needs p > 1");
  const P1Mesh mesh(f.lattice(), f.mask());
  std::vector<Vec2> g;
  mesh.gradients(f.values(), g);
  for (auto& v : g) {
    const double n = norm(v);
    v = n == 0.0 ? Vec2{} : v * (p == 2.0 ? 1.0 : std::pow(n, p - 2.0));
  }
  return divergence_of(f, mesh, g);
}

double weak_form_pairing(const OperatorContext& ctx, const GridFunction& psi) {
  if (!(psi.lattice() == ctx.f().lattice())) throw InvalidArgument("test function lives on a different lattice");
  std::vector<Vec2> g;
  ctx.mesh().gradients(psi.values(), g);
  double s = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) s += dot(ctx.flux()[t], g[t]);
  return s * ctx.mesh().triangle_area();
}

double weak_defect(const P1Mesh& mesh, const std::vector<Vec2>& flux, const std::vector<double>& values, double p,
                   double lambda) {
  const Lattice& l = mesh.lattice();
  const Power pw(p);
  std::vector<double> a;
  mesh.scatter(flux, a);
  const double mass = mesh.node_mass();
  const long oi = std::lround(l.origin.x / l.h), oj = std::lround(l.origin.y / l.h);
  double defect = 0.0, scale = 0.0;
  for (int j = 0; j < l.ny; ++j) {
    if ((oj + j) % 4 != 0) continue;
    for (int i = 0; i < l.nx; ++i) {
      if ((oi + i) % 4 != 0) continue;
      const std::size_t k = l.index(i, j);
      if (!mesh.mask()[k]) continue;
      const double b = lambda * mass * pw.signed_pow_m1(values[k]);
      defect = std::max(defect, std::abs(a[k] - b));
      scale = std::max(scale, std::abs(b));
    }
  }
  if (scale == 0.0) return defect == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return defect / scale;
}

double el_residual(const OperatorContext& ctx, double lambda) {
  return weak_defect(ctx.mesh(), ctx.flux(), ctx.f().values(), ctx.p(), lambda);
}

SelfPairing el_self_pairing(const OperatorContext& ctx, double lambda) {
  const Power pw(ctx.p());
  SelfPairing out{};
  out.energy_term = weak_form_pairing(ctx, ctx.f());
  out.energy_p = pw.abs_pow(ctx.energy());
  double s = 0.0;
  for (double v : ctx.f().values()) s += pw.signed_pow_m1(v) * v;
  out.mass_term = lambda * s * ctx.mesh().node_mass();
  out.mass_p = lambda * pw.abs_pow(lp_norm(ctx.f(), ctx.p()));
  return out;
}

}  // namespace affeig
