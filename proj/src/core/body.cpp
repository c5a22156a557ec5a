#include "affeig/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "affeig/constants.hpp"
#include "affeig/errors.hpp"

namespace affeig {

namespace {

constexpr double kPi = std::numbers::pi;

double powabs(double t, double p) {
  const double a = std::abs(t);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

double signed_pow(double t, double q) {
  if (q == 0.0) return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
  if (q == 1.0) return t;
  return std::copysign(std::pow(std::abs(t), q), t);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Intersection of the half-planes <x, xi_i> <= h_i.
std::vector<Vec2> circumscribed_polygon(const DirectionSet& dirs, const std::vector<double>& h) {
  double big = 0.0;
  for (double v : h) big = std::max(big, v);
  big *= 4.0 * dirs.size();
  std::vector<Vec2> poly = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  std::vector<Vec2> next;
  for (int i = 0; i < dirs.size(); ++i) {
    const Vec2 n = dirs.node(i);
    const double c = h[i];
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 a = poly[k], b = poly[(k + 1) % poly.size()];
      const double da = dot(a, n) - c, db = dot(b, n) - c;
      if (da <= 0) next.push_back(a);
      if ((da < 0 && db > 0) || (da > 0 && db < 0)) next.push_back(a + (b - a) * (da / (da - db)));
    }
    poly.swap(next);
  }
  return poly;
}

double polygon_radial(const std::vector<Vec2>& v, Vec2 xi) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0, n = v.size(); k < n; ++k) {
    const Vec2 e = v[(k + 1) % n] - v[k];
    const Vec2 out = {e.y, -e.x};
    const double den = dot(out, xi);
    if (den > 0) best = std::min(best, dot(out, v[k]) / den);
  }
  return best;
}

double model_support(const SupportModel& m, Vec2 v) {
  if (const auto* poly = std::get_if<PolygonalModel>(&m)) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : poly->vertices) best = std::max(best, dot(v, x));
    return best;
  }
  if (const auto* q = std::get_if<QuadraticModel>(&m)) {
    const Vec2 s = q->gram * v;
    return std::sqrt(std::max(0.0, dot(v, s)));
  }
  const auto& z = std::get<ZonoidModel>(m);
  double s = 0.0;
  for (const auto& u : z.generators) s += powabs(dot(v, u), z.p);
  return z.p == 1.0 ? s : std::pow(s, 1.0 / z.p);
}

std::vector<double> support_samples(const DirectionSet& dirs, const SupportModel& m) {
  std::vector<double> h(dirs.size());
  const int half = dirs.size() / 2;
  for (int i = 0; i < half; ++i) h[i] = h[i + half] = model_support(m, dirs.node(i));
  return h;
}

std::vector<double> radial_by_min(const DirectionSet& dirs, const std::vector<double>& h) {
  const int m = dirs.size();
  std::vector<double> r(m);
  for (int i = 0; i < m / 2; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double c = dot(dirs.node(i), dirs.node(j));
      if (c > 1e-12) best = std::min(best, h[j] / c);
    }
    r[i] = r[i + m / 2] = best;
  }
  return r;
}

std::vector<double> support_by_max(const DirectionSet& dirs, const std::vector<double>& r) {
  const int m = dirs.size();
  std::vector<double> h(m);
  for (int i = 0; i < m / 2; ++i) {
    double best = 0.0;
    for (int j = 0; j < m; ++j) best = std::max(best, r[j] * dot(dirs.node(i), dirs.node(j)));
    h[i] = h[i + m / 2] = best;
  }
  return h;
}

// Radial function from an exact support model: minimize h(eta)/<xi, eta> around the best node.
std::vector<double> radial_refined(const DirectionSet& dirs, const SupportModel& model, const std::vector<double>& h) {
  const int m = dirs.size();
  const double step = 2.0 * kPi / m;
  std::vector<double> r(m);
  for (int i = 0; i < m / 2; ++i) {
    int arg = i;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double c = dot(dirs.node(i), dirs.node(j));
      if (c > 1e-12 && h[j] / c < best) {
        best = h[j] / c;
        arg = j;
      }
    }
    const double theta = dirs.angle(i);
    double delta = dirs.angle(arg) - theta;
    delta = std::remainder(delta, 2.0 * kPi);
    const double lim = 0.5 * kPi - 1e-9;
    double lo = std::max(-lim, delta - step), hi = std::min(lim, delta + step);
    auto g = [&](double d) { return model_support(model, unit_at(theta + d)) / std::cos(d); };
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      if (g1 < g2) {
        hi = x2; x2 = x1; g2 = g1;
        x1 = hi - inv_phi * (hi - lo); g1 = g(x1);
      } else {
        lo = x1; x1 = x2; g1 = g2;
        x2 = lo + inv_phi * (hi - lo); g2 = g(x2);
      }
    }
    r[i] = r[i + m / 2] = std::min({best, g1, g2});
  }
  return r;
}

std::vector<double> reciprocal(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / v[i];
  return out;
}

std::vector<Vec2> polar_vertices(const std::vector<Vec2>& v) {
  std::vector<Vec2> out;
  out.reserve(v.size());
  for (std::size_t k = 0, n = v.size(); k < n; ++k) {
    const Vec2 a = v[k], b = v[(k + 1) % n];
    const double det = cross(a, b);
    if (std::abs(det) <= 1e-14 * norm(a) * norm(b)) continue;
    // Solve <y, a> = 1 and <y, b> = 1.
    out.push_back(Vec2{b.y - a.y, a.x - b.x} / det);
  }
  return convex_hull(std::move(out));
}

}  // namespace

ConvexBody::ConvexBody(const DirectionSet& dirs, std::vector<double> support, std::vector<double> radial,
                       SupportModel model)
    : dirs_(dirs), support_(std::move(support)), radial_(std::move(radial)), model_(std::move(model)) {
  validate();
}

void ConvexBody::validate() const {
  const int m = dirs_.size();
  if (m == 0 || static_cast<int>(support_.size()) != m || static_cast<int>(radial_.size()) != m)
    throw InvalidArgument("convex body sample count does not match the direction set");
  for (int i = 0; i < m; ++i) {
    if (!(support_[i] > 0.0) || !std::isfinite(support_[i]))
      throw InvalidArgument("convex body support must be positive and finite (origin in the interior)");
    if (!(radial_[i] > 0.0) || !std::isfinite(radial_[i]))
      throw InvalidArgument("convex body radial function must be positive and finite");
    const int o = dirs_.opposite(i);
    if (std::abs(support_[i] - support_[o]) > 1e-10 * std::max(support_[i], support_[o]))
      throw InvalidArgument("convex body is not origin-symmetric");
  }
}

ConvexBody ConvexBody::from_support(const DirectionSet& dirs, std::vector<double> support) {
  if (static_cast<int>(support.size()) != dirs.size())
    throw InvalidArgument("support sample count does not match the direction set");
  for (double v : support)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("support samples must be positive and finite");
  auto radial = radial_by_min(dirs, support);
  auto poly = circumscribed_polygon(dirs, support);
  return ConvexBody(dirs, std::move(support), std::move(radial), PolygonalModel{std::move(poly)});
}

ConvexBody ConvexBody::from_radial(const DirectionSet& dirs, std::vector<double> radial) {
  if (static_cast<int>(radial.size()) != dirs.size())
    throw InvalidArgument("radial sample count does not match the direction set");
  for (double v : radial)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("radial samples must be positive and finite");
  auto support = support_by_max(dirs, radial);
  std::vector<Vec2> pts(dirs.size());
  for (int i = 0; i < dirs.size(); ++i) pts[i] = dirs.node(i) * radial[i];
  return ConvexBody(dirs, std::move(support), std::move(radial), PolygonalModel{convex_hull(std::move(pts))});
}

ConvexBody ConvexBody::ball(const DirectionSet& dirs, double radius) {
  if (!(radius > 0)) throw InvalidArgument("ball radius must be positive");
  return ellipse(dirs, Mat2::diag(radius * radius, radius * radius));
}

ConvexBody ConvexBody::ellipse(const DirectionSet& dirs, const Mat2& gram) {
  if (!(gram.a > 0 && gram.det() > 0)) throw InvalidArgument("ellipse gram matrix must be positive definite");
  QuadraticModel q{gram};
  auto h = support_samples(dirs, q);
  const Mat2 inv = gram.inverse();
  std::vector<double> r(dirs.size());
  for (int i = 0; i < dirs.size(); ++i) {
    const Vec2 xi = dirs.node(i);
    r[i] = 1.0 / std::sqrt(dot(xi, inv * xi));
  }
  return ConvexBody(dirs, std::move(h), std::move(r), q);
}

ConvexBody ConvexBody::lp_zonoid(const DirectionSet& dirs, double p, std::vector<Vec2> generators) {
  if (!(p >= 1.0)) throw InvalidArgument("zonoid exponent must be >= 1");
  if (p == 2.0) {
    Mat2 g{0, 0, 0, 0};
    for (const auto& u : generators) g = g + outer(u, u);
    return ellipse(dirs, g);
  }
  ZonoidModel z{p, std::move(generators)};
  auto h = support_samples(dirs, z);
  for (double v : h)
    if (!(v > 0.0)) throw InvalidArgument("zonoid generators do not span the plane");
  auto r = radial_refined(dirs, z, h);
  return ConvexBody(dirs, std::move(h), std::move(r), std::move(z));
}

ConvexBody ConvexBody::from_shape(const DirectionSet& dirs, const ShapeSpec& shape) {
  if (!shape.is_convex()) throw InvalidArgument("shape must be convex to define a convex body");
  const Vec2 c = shape.centroid();
  const ShapeSpec s = shape.transformed(Mat2::identity(), -c);
  if (s.is_ellipse()) {
    const Mat2 m = s.matrix();
    return ellipse(dirs, m * m);
  }
  std::vector<double> h(dirs.size()), r(dirs.size());
  const Box b = s.bounding_box();
  const double scale = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
  for (int i = 0; i < dirs.size(); ++i) {
    h[i] = s.support(dirs.node(i));
    r[i] = polygon_radial(s.vertices(), dirs.node(i));
  }
  for (int i = 0; i < dirs.size(); ++i)
    if (std::abs(h[i] - h[dirs.opposite(i)]) > 1e-10 * scale)
      throw InvalidArgument("shape is not symmetric about its centroid");
  for (int i = 0; i < dirs.size(); ++i) h[i] = h[dirs.opposite(i)] = std::max(h[i], h[dirs.opposite(i)]);
  return ConvexBody(dirs, std::move(h), std::move(r), PolygonalModel{s.vertices()});
}

double ConvexBody::support_at(Vec2 v) const { return model_support(model_, v); }

Vec2 ConvexBody::support_gradient(Vec2 v) const {
  if (v.x == 0.0 && v.y == 0.0) return {};
  if (const auto* poly = std::get_if<PolygonalModel>(&model_)) {
    Vec2 arg = poly->vertices.front();
    double best = dot(v, arg);
    for (const auto& x : poly->vertices)
      if (dot(v, x) > best) {
        best = dot(v, x);
        arg = x;
      }
    return arg;
  }
  if (const auto* q = std::get_if<QuadraticModel>(&model_)) {
    const Vec2 s = q->gram * v;
    return s / std::sqrt(dot(v, s));
  }
  const auto& z = std::get<ZonoidModel>(model_);
  Vec2 g;
  for (const auto& u : z.generators) g += u * signed_pow(dot(v, u), z.p - 1.0);
  const double h = support_at(v);
  return g * std::pow(h, 1.0 - z.p);
}

Vec2 ConvexBody::flux(Vec2 v, double p) const {
  if (v.x == 0.0 && v.y == 0.0) return {};
  if (const auto* q = std::get_if<QuadraticModel>(&model_)) {
    const Vec2 s = q->gram * v;
    const double hh = dot(v, s);
    return s * (p == 2.0 ? 1.0 : std::pow(hh, 0.5 * (p - 2.0)));
  }
  if (const auto* z = std::get_if<ZonoidModel>(&model_); z && z->p == p) {
    Vec2 g;
    for (const auto& u : z->generators) g += u * signed_pow(dot(v, u), p - 1.0);
    return g;
  }
  return support_gradient(v) * std::pow(support_at(v), p - 1.0);
}

ConvexBody ConvexBody::transformed(const Mat2& a) const {
  if (!(std::abs(a.det()) > 1e-14)) throw InvalidArgument("linear map is singular");
  if (const auto* q = std::get_if<QuadraticModel>(&model_)) return ellipse(dirs_, a * q->gram * a.transpose());
  if (const auto* z = std::get_if<ZonoidModel>(&model_)) {
    std::vector<Vec2> g;
    g.reserve(z->generators.size());
    for (const auto& u : z->generators) g.push_back(a * u);
    return lp_zonoid(dirs_, z->p, std::move(g));
  }
  std::vector<Vec2> v;
  for (const auto& x : std::get<PolygonalModel>(model_).vertices) v.push_back(a * x);
  v = convex_hull(std::move(v));
  PolygonalModel poly{v};
  auto h = support_samples(dirs_, poly);
  std::vector<double> r(dirs_.size());
  for (int i = 0; i < dirs_.size(); ++i) r[i] = polygon_radial(v, dirs_.node(i));
  return ConvexBody(dirs_, std::move(h), std::move(r), std::move(poly));
}

ConvexBody ConvexBody::polar() const {
  auto h = reciprocal(radial_);
  auto r = reciprocal(support_);
  if (const auto* q = std::get_if<QuadraticModel>(&model_)) return ConvexBody(dirs_, h, r, QuadraticModel{q->gram.inverse()});
  if (const auto* poly = std::get_if<PolygonalModel>(&model_))
    return ConvexBody(dirs_, std::move(h), std::move(r), PolygonalModel{polar_vertices(poly->vertices)});
  std::vector<Vec2> pts(dirs_.size());
  for (int i = 0; i < dirs_.size(); ++i) pts[i] = dirs_.node(i) * r[i];
  return ConvexBody(dirs_, std::move(h), std::move(r), PolygonalModel{convex_hull(std::move(pts))});
}

bool ConvexBody::samples_convex(double tol) const {
  // A support sample is admissible iff it does not exceed the support of the
  // circumscribed polygon of its two neighbours.
  const int m = dirs_.size();
  for (int i = 0; i < m; ++i) {
    const int a = (i + m - 1) % m, b = (i + 1) % m;
    const Vec2 na = dirs_.node(a), nb = dirs_.node(b);
    const double det = cross(na, nb);
    const Vec2 corner = Vec2{support_[a] * nb.y - support_[b] * na.y, support_[b] * na.x - support_[a] * nb.x} / det;
    if (support_[i] > dot(dirs_.node(i), corner) + tol * support_[i]) return false;
  }
  return true;
}

ConvexBody polar_body(const ConvexBody& k) { return k.polar(); }

double body_volume(const ConvexBody& k) {
  const auto& d = k.directions();
  double s = 0.0;
  for (int i = 0; i < d.size(); ++i) s += d.weight(i) * k.radial()[i] * k.radial()[i];
  return 0.5 * s;
}

double model_volume(const ConvexBody& k) {
  if (const auto* poly = std::get_if<PolygonalModel>(&k.model())) {
    const auto& v = poly->vertices;
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
    return 0.5 * std::abs(s);
  }
  if (const auto* q = std::get_if<QuadraticModel>(&k.model())) return kPi * std::sqrt(q->gram.det());
  return body_volume(k);
}

double santalo_product(const ConvexBody& k) { return model_volume(k) * model_volume(k.polar()); }

namespace {

// First moment of the half of the model body where <u, x> >= 0; the integral of |<u, x>|
// over the body is twice its pairing with u.
std::optional<Vec2> half_moment(const SupportModel& m, Vec2 u) {
  if (const auto* q = std::get_if<QuadraticModel>(&m)) {
    const Mat2 a = sqrt_spd(q->gram);
    const Vec2 n = a * u;
    return a * (n / norm(n)) * (2.0 / 3.0 * a.det());
  }
  const auto* poly = std::get_if<PolygonalModel>(&m);
  if (!poly) return std::nullopt;
  const auto& v = poly->vertices;
  std::vector<Vec2> half;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n];
    const double da = dot(u, a), db = dot(u, b);
    if (da >= 0) half.push_back(a);
    if ((da >= 0) != (db >= 0)) half.push_back(a + (b - a) * (da / (da - db)));
  }
  Vec2 moment;
  for (std::size_t i = 0, n = half.size(); i < n; ++i) {
    const Vec2 a = half[i], b = half[(i + 1) % n];
    moment += (a + b) * (cross(a, b) / 6.0);
  }
  return moment;
}

}  // namespace

ConvexBody centroid_body(const ConvexBody& k, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("centroid body exponent must be >= 1");
  const auto& d = k.directions();
  // p = 1 from exact half moments; the quadrature would hit a kink in the integrand.
  if (p == 1.0 && !std::holds_alternative<ZonoidModel>(k.model())) {
    const double scale = 6.0 / (constants::centroid_normalizers(2, 1.0).r * model_volume(k));
    std::vector<double> support(d.size());
    for (int i = 0; i < d.size(); ++i) support[i] = scale * dot(d.node(i), *half_moment(k.model(), d.node(i)));
    return ConvexBody::from_support(d, std::move(support));
  }
  const double norm_factor = constants::centroid_normalizers(2, p).r * body_volume(k);
  std::vector<Vec2> gens;
  gens.reserve(d.size() / 2);
  // Opposite nodes contribute equally; keep one of each pair with doubled weight.
  for (int i = 0; i < d.size() / 2; ++i) {
    const double mass = 2.0 * d.weight(i) * std::pow(k.radial()[i], 2.0 + p) / norm_factor;
    gens.push_back(d.node(i) * std::pow(mass, 1.0 / p));
  }
  return ConvexBody::lp_zonoid(d, p, std::move(gens));
}


double busemann_petty_margin(const ConvexBody& k, double p) {
  // At p = 1 the direction quadrature meets a kink and converges only at second order.
  // Polygons and ellipses instead use exact moments, which give the support h and its
  // angular derivative, and the volume (1/2) int (h^2 - h'^2) converges fast.
  if (p == 1.0 && !std::holds_alternative<ZonoidModel>(k.model())) {
    const auto& d = k.directions();
    const double vol = model_volume(k);
    const double scale = 6.0 / (constants::centroid_normalizers(2, 1.0).r * vol);
    double s = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      const Vec2 u = d.node(i);
      const Vec2 m = *half_moment(k.model(), u);
      const double h = scale * dot(u, m), dh = scale * dot(perp(u), m);
      s += d.weight(i) * (h * h - dh * dh);
    }
    return 0.5 * s / vol - 1.0;
  }
  return body_volume(centroid_body(k, p)) / body_volume(k) - 1.0;
}

double projection_support(const ShapeSpec& polygon, Vec2 xi) {
  const ShapeSpec s = polygon.is_polygon() ? polygon : polygon.polygonize(256);
  const auto& v = s.vertices();
  double h = 0.0;
  for (std::size_t k = 0, n = v.size(); k < n; ++k) h += std::abs(cross(v[(k + 1) % n] - v[k], xi));
  return 0.5 * h;
}

ConvexBody projection_body(const ShapeSpec& polygon, const DirectionSet& dirs) {
  const ShapeSpec s = polygon.is_polygon() ? polygon : polygon.polygonize(256);
  const auto& v = s.vertices();
  std::vector<Vec2> gens;
  for (std::size_t k = 0, n = v.size(); k < n; ++k) gens.push_back(perp(v[(k + 1) % n] - v[k]) * 0.5);
  return ConvexBody::lp_zonoid(dirs, 1.0, std::move(gens));
}

ConvexBody polar_projection_body(const ShapeSpec& polygon, const DirectionSet& dirs) {
  return projection_body(polygon, dirs).polar();
}

double polar_projection_volume(const ShapeSpec& polygon) {
  const ShapeSpec s = polygon.is_polygon() ? polygon : polygon.polygonize(256);
  const auto& v = s.vertices();
  const std::size_t n = v.size();
  std::vector<Vec2> edges(n);
  std::vector<double> kinks;
  for (std::size_t k = 0; k < n; ++k) {
    edges[k] = v[(k + 1) % n] - v[k];
    // |<perp(e), u(theta)>| vanishes where u is parallel to e.
    const double a = std::atan2(edges[k].y, edges[k].x);
    for (double t : {a, a + kPi}) kinks.push_back(std::fmod(t + 4.0 * kPi, 2.0 * kPi));
  }
  kinks.push_back(0.0);
  kinks.push_back(2.0 * kPi);
  std::sort(kinks.begin(), kinks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const double t0 = kinks[i], t1 = kinks[i + 1];
    if (t1 - t0 < 1e-15) continue;
    const Vec2 mid = unit_at(0.5 * (t0 + t1));
    // On this arc h(theta) = <a, u(theta)> = |a| cos(theta - phi).
    Vec2 a;
    for (const auto& e : edges) {
      const Vec2 q = perp(e) * 0.5;
      a += dot(q, mid) >= 0 ? q : -q;
    }
    const double phi = std::atan2(a.y, a.x);
    total += (std::tan(t1 - phi) - std::tan(t0 - phi)) / dot(a, a);
  }
  return 0.5 * total;
}

}  // namespace affeig
