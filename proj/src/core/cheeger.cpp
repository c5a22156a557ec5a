#include "affeig/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "affeig/constants.hpp"
#include "affeig/errors.hpp"
#include "affeig/parallel.hpp"

namespace affeig {

namespace {

constexpr double kPi = std::numbers::pi;

ShapeSpec as_polygon(const ShapeSpec& s, int vertices) { return s.is_ellipse() ? s.polygonize(vertices) : s; }

// Outward edge normals of a polygon domain.
std::vector<Vec2> test_directions(const ShapeSpec& domain) {
  std::vector<Vec2> out;
  if (domain.is_polygon()) {
    const auto& v = domain.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      out.push_back(Vec2{e.y, -e.x} / norm(e));
    }
  }
  return out;
}

struct Template {
  ShapeSpec shape;  // centred near the origin
  std::string family;
  std::vector<double> params;
  double perimeter;
  double area;
  double affine;  // affine ratio at unit scale
};

Template make_template(ShapeSpec shape, std::string family, std::vector<double> params, int ev) {
  Template t{shape, std::move(family), std::move(params), shape.perimeter(), shape.area(), 0.0};
  t.affine = affine_cheeger_ratio(shape, ev);
  return t;
}

Mat2 sl2(double angle, double stretch, double shear) {
  return Mat2::rotation(angle) * Mat2::diag(stretch, 1.0 / stretch) * Mat2::shear(shear);
}

std::vector<Template> templates(const ShapeSpec& domain, CandidateFamily fam, int ev) {
  std::vector<Template> out;
  const bool all = fam == CandidateFamily::All;
  if (all || fam == CandidateFamily::Disk) out.push_back(make_template(ShapeSpec::disk(1.0), "disk", {1.0}, ev));
  if (all || fam == CandidateFamily::Ellipse) {
    for (int a = 0; a <= 6; ++a) {
      const double stretch = std::pow(4.0, a / 6.0);
      for (int r = 0; r < (a == 0 ? 1 : 8); ++r) {
        const double angle = kPi * r / 8.0;
        const Mat2 m = Mat2::rotation(angle) * Mat2::diag(stretch, 1.0 / stretch) * Mat2::rotation(-angle);
        out.push_back(make_template(ShapeSpec::ellipse(m), "ellipse", {stretch, angle}, ev));
      }
    }
  }
  if (all || fam == CandidateFamily::RoundedSquare) {
    for (int r = 0; r < 4; ++r)
      for (int j = 0; j < 32; ++j) {
        const double radius = j / 31.0, angle = kPi / 8.0 * r;
        ShapeSpec s = rounded_square(radius).transformed(Mat2::rotation(angle));
        out.push_back(make_template(std::move(s), "rounded-square", {radius, angle}, ev));
      }
  }
  if (all || fam == CandidateFamily::AffineTemplate) {
    const ShapeSpec base = as_polygon(domain, ev);
    const Vec2 c = base.centroid();
    const double scale = 1.0 / std::sqrt(base.area());
    const double stretches[] = {0.5, 0.75, 1.0, 1.33, 2.0};
    const double shears[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int r = 0; r < 4; ++r)
      for (double st : stretches)
        for (double sh : shears) {
          const double angle = kPi / 4.0 * r;
          if (st == 1.0 && r > 0) continue;
          const Mat2 a = sl2(angle, st, sh) * Mat2::diag(scale, scale);
          out.push_back(make_template(base.transformed(a, a * (-c)), "affine-template", {angle, st, sh}, ev));
        }
  }
  return out;
}

std::vector<Vec2> centres(const ShapeSpec& domain, int per_side) {
  std::vector<Vec2> out{domain.centroid()};
  if (per_side <= 1) return out;
  const Box b = domain.bounding_box();
  for (int j = 0; j < per_side; ++j)
    for (int i = 0; i < per_side; ++i) {
      const Vec2 x{b.lo.x + (b.hi.x - b.lo.x) * (i + 0.5) / per_side,
                   b.lo.y + (b.hi.y - b.lo.y) * (j + 0.5) / per_side};
      if (domain.contains(x)) out.push_back(x);
    }
  return out;
}

// Largest s with c + s T inside the domain. Polygon domains use their edge normals; ellipse
// domains are mapped to the unit disk, exactly for polygonal templates and by boundary
// sampling for elliptic ones.
double max_scale(const ShapeSpec& domain, const std::vector<Vec2>& dirs, const std::vector<double>& hdom,
                 const ShapeSpec& t, Vec2 c) {
  double s = std::numeric_limits<double>::infinity();
  if (domain.is_polygon()) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double ht = t.support(dirs[k]);
      if (ht > 0.0) s = std::min(s, (hdom[k] - dot(dirs[k], c)) / ht);
    }
    return std::max(0.0, s);
  }
  const Mat2 inv = domain.matrix().inverse();
  const Vec2 a = inv * (c - domain.center());
  const double room = 1.0 - dot(a, a);
  if (!(room > 0.0)) return 0.0;
  auto limit = [&](Vec2 x) {
    const Vec2 b = inv * x;
    const double bb = dot(b, b), ab = dot(a, b);
    if (bb > 0.0) s = std::min(s, (-ab + std::sqrt(ab * ab + bb * room)) / bb);
  };
  if (t.is_polygon()) {
    for (const Vec2& v : t.vertices()) limit(v);
  } else {
    const int m = 2048;
    for (int i = 0; i < m; ++i) limit(t.center() + t.matrix() * unit_at(2.0 * kPi * i / m));
  }
  return s;
}

}  // namespace

double classical_cheeger_ratio(const ShapeSpec& set) {
  const double a = set.area();
  if (!(a > 0.0)) throw InvalidArgument("degenerate set: zero area");
  return set.perimeter() / a;
}

double affine_cheeger_ratio(const ShapeSpec& set, int ellipse_vertices) {
  const ShapeSpec poly = as_polygon(set, ellipse_vertices);
  const double a = poly.area();
  if (!(a > 0.0)) throw InvalidArgument("degenerate set: zero area");
  const double vol = polar_projection_volume(poly);
  const double e1 = std::sqrt(2.0) * constants::c_np(2, 1.0) / std::sqrt(vol);
  return e1 / a;
}

double det_scaling_defect(const ShapeSpec& set, const Mat2& a, int ellipse_vertices) {
  const double det = std::abs(a.det());
  if (!(det > 0.0)) throw InvalidArgument("matrix must be invertible");
  const ShapeSpec poly = as_polygon(set, ellipse_vertices);
  const double predicted = affine_cheeger_ratio(poly) / std::sqrt(det);
  return std::abs(affine_cheeger_ratio(apply_linear(poly, a)) - predicted) / predicted;
}

const char* to_string(CandidateFamily f) {
  switch (f) {
    case CandidateFamily::Disk: return "disk";
    case CandidateFamily::Ellipse: return "ellipse";
    case CandidateFamily::RoundedSquare: return "rounded-square";
    case CandidateFamily::AffineTemplate: return "affine-template";
    default: return "all";
  }
}

CandidateFamily parse_family(const std::string& s) {
  for (auto f : {CandidateFamily::Disk, CandidateFamily::Ellipse, CandidateFamily::RoundedSquare,
                 CandidateFamily::AffineTemplate, CandidateFamily::All})
    if (s == to_string(f)) return f;
  throw InvalidArgument("family must be disk, ellipse, rounded-square, affine-template or all, got '" + s + "'");
}

ShapeSpec rounded_square(double radius, int arc_vertices) {
  if (!(radius >= 0.0 && radius <= 1.0)) throw InvalidArgument("corner radius must lie in [0, 1]");
  if (radius == 0.0) return ShapeSpec::rectangle({-1.0, -1.0}, {1.0, 1.0});
  std::vector<Vec2> v;
  const double inner = 1.0 - radius;
  const Vec2 corners[4] = {{inner, -inner}, {inner, inner}, {-inner, inner}, {-inner, -inner}};
  for (int q = 0; q < 4; ++q) {
    const double start = -0.5 * kPi + 0.5 * kPi * q;
    for (int i = 0; i <= arc_vertices; ++i) {
      if (radius == 1.0 && i == arc_vertices) continue;  // arcs meet
      v.push_back(corners[q] + unit_at(start + 0.5 * kPi * i / arc_vertices) * radius);
    }
  }
  return ShapeSpec::polygon(std::move(v));
}

CheegerReport cheeger_search(const ShapeSpec& domain, const CheegerOptions& opts) {
  if (!domain.is_convex()) throw InvalidArgument("cheeger search needs a convex domain");
  if (opts.budget < 1) throw InvalidArgument("budget must be positive");
  const std::vector<Template> temps = templates(domain, opts.family, opts.ellipse_vertices);
  const int per = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(opts.budget) / temps.size())));
  const std::vector<Vec2> cs = centres(domain, per);
  const std::vector<Vec2> dirs = test_directions(domain);
  std::vector<double> hdom(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) hdom[k] = domain.support(dirs[k]);

  // Best centre per template; ratios scale like 1/s.
  std::vector<double> best_s(temps.size(), 0.0);
  std::vector<Vec2> best_c(temps.size());
  parallel_for(
      temps.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t)
          for (const Vec2& c : cs) {
            const double s = max_scale(domain, dirs, hdom, temps[t].shape, c);
            if (s > best_s[t]) {
              best_s[t] = s;
              best_c[t] = c;
            }
          }
      },
      1);

  CheegerReport rep;
  rep.evaluated = static_cast<int>(temps.size() * cs.size());
  auto candidate = [&](std::size_t t) {
    const Template& tp = temps[t];
    const double s = best_s[t];
    CheegerCandidate c;
    c.set = tp.shape.transformed(Mat2::diag(s, s), best_c[t]);
    c.family = tp.family;
    c.params = tp.params;
    c.center = best_c[t];
    c.scale = s;
    c.perimeter = s * tp.perimeter;
    c.classical_ratio = tp.perimeter / (s * tp.area);
    c.affine_ratio = tp.affine / s;
    return c;
  };
  // Lowest ratio wins; near ties go to the smaller perimeter, then to the earlier template.
  auto pick = [&](auto ratio_of) {
    std::size_t best = temps.size();
    double br = 0.0, bp = 0.0;
    for (std::size_t t = 0; t < temps.size(); ++t) {
      if (!(best_s[t] > 0.0)) continue;
      const double r = ratio_of(t), perim = best_s[t] * temps[t].perimeter;
      if (best == temps.size() || r < br * (1.0 - 1e-12) || (r <= br * (1.0 + 1e-12) && perim < bp)) {
        best = t;
        br = r;
        bp = perim;
      }
    }
    if (best == temps.size()) throw Infeasible("no candidate fits inside the domain");
    return best;
  };
  rep.classical_best = candidate(pick([&](std::size_t t) { return temps[t].perimeter / (best_s[t] * temps[t].area); }));
  const std::size_t aw = pick([&](std::size_t t) { return temps[t].affine / best_s[t]; });
  rep.affine_best = candidate(aw);
  const ShapeSpec& winner = rep.affine_best.set;
  rep.position = maximal_volume_position(winner, domain, opts.budget);
  rep.position_ratio = winner.area() / rep.position.volume;
  rep.position_ok = rep.position_ratio >= 1.0 - opts.position_tolerance;
  return rep;
}

}  // namespace affeig
