#include "affeig/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affeig/constants.hpp"
#include "affeig/errors.hpp"
#include "affeig/parallel.hpp"

namespace affeig {

namespace {

constexpr double kDegenerate = 1e-10;

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent p must be >= 1");
}

void require_nonzero(const GridFunction& f) {
  if (f.is_zero()) throw InvalidArgument("function is identically zero");
}

bool indicator_path(const GridFunction& f, double p) { return p == 1.0 && f.indicator().has_value(); }

}  // namespace

Power::Power(double p) : p_(p) {
  require_p(p);
  if (p == 1.0) kind_ = Kind::One;
  else if (p == 1.5) kind_ = Kind::ThreeHalves;
  else if (p == 2.0) kind_ = Kind::Two;
  else if (p == 3.0) kind_ = Kind::Three;
  else kind_ = Kind::General;
}

double Power::abs_pow(double t) const {
  const double a = std::abs(t);
  switch (kind_) {
    case Kind::One: return a;
    case Kind::ThreeHalves: return a * std::sqrt(a);
    case Kind::Two: return a * a;
    case Kind::Three: return a * a * a;
    default: return std::pow(a, p_);
  }
}

double Power::signed_pow_m1(double t) const {
  switch (kind_) {
    case Kind::One: return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
    case Kind::ThreeHalves: return std::copysign(std::sqrt(std::abs(t)), t);
    case Kind::Two: return t;
    case Kind::Three: return t * std::abs(t);
    default: return std::copysign(std::pow(std::abs(t), p_ - 1.0), t);
  }
}

double Power::curvature(double t, double eps2) const {
  switch (kind_) {
    case Kind::Two: return 1.0;
    case Kind::Three: return std::sqrt(t * t + eps2);
    case Kind::ThreeHalves: return 1.0 / std::sqrt(std::sqrt(t * t + eps2));
    default: return std::pow(t * t + eps2, 0.5 * (p_ - 2.0));
  }
}

double Power::root(double x) const {
  switch (kind_) {
    case Kind::One: return x;
    case Kind::Two: return std::sqrt(x);
    case Kind::Three: return std::cbrt(x);
    default: return std::pow(x, 1.0 / p_);
  }
}

AffineKernel::AffineKernel(const DirectionSet& dirs, double p, double triangle_area)
    : dirs_(dirs), pow_(p), area_(triangle_area), half_(dirs.size() / 2), c_(constants::c_np(2, p)) {}

void AffineKernel::norms_pow(const std::vector<Vec2>& g, std::vector<double>& out) const {
  out.assign(half_, 0.0);
  if (pow_.p() == 2.0) {
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& v : g) {
      sxx += v.x * v.x;
      sxy += v.x * v.y;
      syy += v.y * v.y;
    }
    for (int k = 0; k < half_; ++k) {
      const Vec2 xi = dirs_.node(k);
      out[k] = area_ * (xi.x * xi.x * sxx + 2.0 * xi.x * xi.y * sxy + xi.y * xi.y * syy);
    }
    return;
  }
  parallel_for(half_, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Vec2 xi = dirs_.node(static_cast<int>(k));
      double s = 0.0;
      for (const auto& v : g) s += pow_.abs_pow(xi.x * v.x + xi.y * v.y);
      out[k] = area_ * s;
    }
  }, 1);
}

double AffineKernel::energy(const std::vector<double>& npow) const {
  double s = 0.0;
  for (int k = 0; k < half_; ++k) s += 2.0 * dirs_.weight(k) / std::pow(npow[k], 2.0 / pow_.p());
  return c_ / std::sqrt(s);
}

std::vector<double> AffineKernel::direction_weights(const std::vector<double>& npow, double energy) const {
  const double p = pow_.p();
  const double scale = std::pow(energy, p + 2.0) / (c_ * c_);
  std::vector<double> mu(half_);
  for (int k = 0; k < half_; ++k) mu[k] = scale * 2.0 * dirs_.weight(k) * std::pow(npow[k], -(2.0 + p) / p);
  return mu;
}

void AffineKernel::flux(const std::vector<Vec2>& g, const std::vector<double>& mu, std::vector<Vec2>& out) const {
  out.resize(g.size());
  if (pow_.p() == 2.0) {
    Mat2 w{0, 0, 0, 0};
    for (int k = 0; k < half_; ++k) w = w + outer(dirs_.node(k), dirs_.node(k)) * mu[k];
    for (std::size_t t = 0; t < g.size(); ++t) out[t] = w * g[t];
    return;
  }
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const Vec2 v = g[t];
      Vec2 phi;
      if (v.x != 0.0 || v.y != 0.0)
        for (int k = 0; k < half_; ++k) {
          const Vec2 xi = dirs_.node(k);
          phi += xi * (mu[k] * pow_.signed_pow_m1(xi.x * v.x + xi.y * v.y));
        }
      out[t] = phi;
    }
  }, 512);
}

void AffineKernel::hessians(const std::vector<Vec2>& g, const std::vector<double>& mu, double eps2,
                            std::vector<Mat2>& out) const {
  out.resize(g.size());
  const double pm1 = pow_.p() - 1.0;
  if (pow_.p() == 2.0) {
    Mat2 w{0, 0, 0, 0};
    for (int k = 0; k < half_; ++k) w = w + outer(dirs_.node(k), dirs_.node(k)) * mu[k];
    std::fill(out.begin(), out.end(), w);
    return;
  }
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const Vec2 v = g[t];
      Mat2 d{0, 0, 0, 0};
      for (int k = 0; k < half_; ++k) {
        const Vec2 xi = dirs_.node(k);
        d = d + outer(xi, xi) * (pm1 * mu[k] * pow_.curvature(xi.x * v.x + xi.y * v.y, eps2));
      }
      out[t] = d;
    }
  }, 512);
}

double lp_norm(const GridFunction& f, double p) {
  const Power pw(p);
  double s = 0.0;
  for (double v : f.values()) s += pw.abs_pow(v);
  return pw.root(s * f.h() * f.h());
}

double grad_norm(const GridFunction& f, double p) {
  const Power pw(p);
  if (indicator_path(f, p)) return f.indicator()->perimeter();
  const P1Mesh mesh(f.lattice(), f.mask());
  std::vector<Vec2> g;
  mesh.gradients(f.values(), g);
  double s = 0.0;
  for (const auto& v : g) s += pw.abs_pow(norm(v));
  return pw.root(s * mesh.triangle_area());
}

double directional_norm(const GridFunction& f, Vec2 xi, double p) {
  const Power pw(p);
  if (std::abs(norm(xi) - 1.0) > 1e-12) throw InvalidArgument("direction must be a unit vector");
  if (indicator_path(f, p)) return 2.0 * projection_support(*f.indicator(), xi);
  const P1Mesh mesh(f.lattice(), f.mask());
  std::vector<Vec2> g;
  mesh.gradients(f.values(), g);
  double s = 0.0;
  for (const auto& v : g) s += pw.abs_pow(dot(v, xi));
  return pw.root(s * mesh.triangle_area());
}

EnergyBreakdown affine_energy(const GridFunction& f, double p, const DirectionSet& dirs) {
  require_p(p);
  require_nonzero(f);
  const Power pw(p);
  EnergyBreakdown out;
  out.p = p;
  out.lp_norm = lp_norm(f, p);
  out.grad_norm = grad_norm(f, p);
  const int m = dirs.size();
  out.directional_norms.assign(m, 0.0);
  const P1Mesh mesh(f.lattice(), f.mask());
  const AffineKernel kernel(dirs, p, mesh.triangle_area());
  std::vector<double> npow;
  if (indicator_path(f, p)) {
    npow.resize(m / 2);
    for (int k = 0; k < m / 2; ++k) npow[k] = 2.0 * projection_support(*f.indicator(), dirs.node(k));
  } else {
    std::vector<Vec2> g;
    mesh.gradients(f.values(), g);
    kernel.norms_pow(g, npow);
  }
  const double threshold = kDegenerate * out.grad_norm;
  for (int k = 0; k < m / 2; ++k) {
    const double n = pw.root(npow[k]);
    if (!(n >= threshold) || n == 0.0) throw DegenerateDirection(k, n, threshold);
    out.directional_norms[k] = out.directional_norms[k + m / 2] = n;
  }
  out.energy = kernel.energy(npow);
  return out;
}

LBody body_L(const GridFunction& f, double p, const DirectionSet& dirs) {
  const EnergyBreakdown e = affine_energy(f, p, dirs);
  LBody out{ConvexBody::from_support(dirs, e.directional_norms), 0.0, 0.0};
  // Radial function of the gauge body is 1 / ||grad_xi f||_p.
  double s = 0.0;
  for (int i = 0; i < dirs.size(); ++i) s += dirs.weight(i) / (e.directional_norms[i] * e.directional_norms[i]);
  out.volume = 0.5 * s;
  out.energy_from_volume = constants::c_np(2, p) * std::pow(2.0, -0.5) / std::sqrt(out.volume);
  return out;
}

double rayleigh_classical(const GridFunction& f, double p) {
  require_nonzero(f);
  const Power pw(p);
  return pw.abs_pow(grad_norm(f, p)) / pw.abs_pow(lp_norm(f, p));
}

double rayleigh_affine(const GridFunction& f, double p, const DirectionSet& dirs) {
  const EnergyBreakdown e = affine_energy(f, p, dirs);
  const Power pw(p);
  return pw.abs_pow(e.energy) / pw.abs_pow(e.lp_norm);
}

double distribution_function(const GridFunction& f, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("distribution level must be >= 0");
  std::size_t count = 0;
  for (double v : f.values()) count += std::abs(v) > t;
  return count * f.h() * f.h();
}

}  // namespace affeig
