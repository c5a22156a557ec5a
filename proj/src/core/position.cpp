#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "affeig/body.hpp"
#include "affeig/errors.hpp"

namespace affeig {

namespace {

struct Circle {
  Vec2 c;
  double r = -1.0;
  bool covers(Vec2 p) const { return r >= 0 && norm(p - c) <= r * (1 + 1e-12) + 1e-300; }
};

Circle circle2(Vec2 a, Vec2 b) { return {(a + b) * 0.5, 0.5 * norm(a - b)}; }

Circle circle3(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  if (std::abs(d) < 1e-300) {
    Circle best = circle2(a, b);
    for (auto cand : {circle2(a, c), circle2(b, c)})
      if (cand.r > best.r) best = cand;
    return best;
  }
  const Vec2 o = Vec2{ac.y * dot(ab, ab) - ab.y * dot(ac, ac), ab.x * dot(ac, ac) - ac.x * dot(ab, ab)} / d;
  return {a + o, norm(o)};
}

// Smallest enclosing circle; deterministic incremental construction.
Circle enclosing_circle(const std::vector<Vec2>& pts) {
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (c.covers(pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.covers(pts[j])) continue;
      c = circle2(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!c.covers(pts[k])) c = circle3(pts[i], pts[j], pts[k]);
    }
  }
  return c;
}

struct HalfPlanes {
  std::vector<Vec2> normals;  // unit outward normals of the container edges
  std::vector<double> offsets;
};

// Nonempty intersection of <t, n_j> <= c_j; returns a point inside when feasible.
bool feasible_point(const HalfPlanes& hp, const std::vector<double>& c, Vec2& out) {
  double big = 1.0;
  for (double v : hp.offsets) big = std::max(big, 10.0 * std::abs(v));
  std::vector<Vec2> poly = {{-big, -big}, {big, -big}, {big, big}, {-big, big}}, next;
  for (std::size_t j = 0; j < hp.normals.size() && !poly.empty(); ++j) {
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 a = poly[k], b = poly[(k + 1) % poly.size()];
      const double da = dot(a, hp.normals[j]) - c[j], db = dot(b, hp.normals[j]) - c[j];
      if (da <= 0) next.push_back(a);
      if ((da < 0 && db > 0) || (da > 0 && db < 0)) next.push_back(a + (b - a) * (da / (da - db)));
    }
    poly.swap(next);
  }
  if (poly.empty()) return false;
  Vec2 s;
  for (const auto& p : poly) s += p;
  out = s / static_cast<double>(poly.size());
  return true;
}

class Placer {
 public:
  Placer(const ShapeSpec& body, const ShapeSpec& container) : body_(body), container_(container) {
    if (container.is_polygon()) {
      const auto& v = container.vertices();
      for (std::size_t k = 0, n = v.size(); k < n; ++k) {
        const Vec2 e = v[(k + 1) % n] - v[k];
        const Vec2 nrm = Vec2{e.y, -e.x} / norm(e);
        hp_.normals.push_back(nrm);
        hp_.offsets.push_back(dot(nrm, v[k]));
      }
    }
  }

  // Largest s and a translation with s*B*body + t inside the container.
  std::pair<double, Vec2> place(const Mat2& b) const {
    if (container_.is_ellipse()) {
      const Mat2 minv = container_.matrix().inverse();
      const Mat2 l = minv * b;
      Circle c;
      if (body_.is_ellipse()) {
        const Mat2 lm = l * body_.matrix();
        const Mat2 g = lm.transpose() * lm;
        const double m = 0.5 * g.trace();
        const double smax = std::sqrt(m + std::sqrt(std::max(0.0, m * m - g.det())));
        c = {l * body_.center(), smax};
      } else {
        std::vector<Vec2> pts;
        for (const auto& x : body_.vertices()) pts.push_back(l * x);
        c = enclosing_circle(pts);
      }
      const double s = 1.0 / c.r;
      return {s, container_.center() - container_.matrix() * (c.c * s)};
    }
    std::vector<double> g(hp_.normals.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = body_.support(b.transpose() * hp_.normals[j]);
    std::vector<double> c(g.size());
    Vec2 t;
    auto ok = [&](double s, Vec2& where) {
      for (std::size_t j = 0; j < g.size(); ++j) c[j] = hp_.offsets[j] - s * g[j];
      return feasible_point(hp_, c, where);
    };
    double lo = 0.0, hi = 1.0;
    Vec2 where;
    while (ok(hi, where) && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ok(mid, where)) lo = mid;
      else hi = mid;
    }
    if (lo <= 0.0 || !ok(lo, t)) return {0.0, {}};
    return {lo, t};
  }

 private:
  const ShapeSpec& body_;
  const ShapeSpec& container_;
  HalfPlanes hp_;
};

Mat2 linear_part(double angle, double stretch, double shear) {
  return Mat2::rotation(angle) * Mat2::diag(stretch, 1.0 / stretch) * Mat2::shear(shear);
}

}  // namespace

Position maximal_volume_position(const ShapeSpec& body, const ShapeSpec& container, int budget) {
  if (!body.is_convex() || !container.is_convex()) throw InvalidArgument("maximal_volume_position needs convex shapes");
  if (budget < 1) throw InvalidArgument("search budget must be positive");
  int per = std::max(3, static_cast<int>(std::floor(std::cbrt(static_cast<double>(budget)))));
  const int odd = per % 2 == 1 ? per : per + 1;
  Position best;
  best.angle_steps = per;
  best.stretch_steps = odd;
  best.shear_steps = odd;
  best.stretch_min = 0.5;
  best.stretch_max = 2.0;
  best.shear_min = -2.0;
  best.shear_max = 2.0;
  Placer placer(body, container);
  double best_s = 0.0;
  double ba = 0, bs = 1, bh = 0;
  auto consider = [&](double angle, double stretch, double shear) {
    const Mat2 b = linear_part(angle, stretch, shear);
    const auto [s, t] = placer.place(b);
    if (s > best_s * (1.0 + 1e-13)) {
      best_s = s;
      best.matrix = b * s;
      best.translation = t;
      ba = angle;
      bs = stretch;
      bh = shear;
    }
  };
  for (int i = 0; i < per; ++i)
    for (int j = 0; j < odd; ++j)
      for (int k = 0; k < odd; ++k) {
        const double angle = std::numbers::pi * i / per;
        const double stretch = std::exp(std::log(0.5) + std::log(4.0) * j / (odd - 1));
        const double shear = -2.0 + 4.0 * k / (odd - 1);
        consider(angle, stretch, shear);
      }
  // Pattern search around the best grid point; only improves the bound.
  double da = std::numbers::pi / per, ds = std::log(4.0) / (odd - 1), dh = 4.0 / (odd - 1);
  for (int it = 0; it < 40; ++it) {
    const double a0 = ba, s0 = bs, h0 = bh;
    for (int dir = -1; dir <= 1; dir += 2) {
      consider(a0 + dir * da, s0, h0);
      consider(a0, std::clamp(s0 * std::exp(dir * ds), 0.5, 2.0), h0);
      consider(a0, s0, std::clamp(h0 + dir * dh, -2.0, 2.0));
    }
    if (a0 == ba && s0 == bs && h0 == bh) {
      da *= 0.5;
      ds *= 0.5;
      dh *= 0.5;
    }
  }
  if (!(best_s > 0.0)) throw Infeasible("no contained position of the body inside the container");
  best.scale = best_s;
  best.volume = best_s * best_s * body.area();
  return best;
}

}  // namespace affeig
