#include "affeig/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "affeig/errors.hpp"

namespace affeig {

namespace {

constexpr double kPi = std::numbers::pi;

double inradius_about(const ShapeSpec& s, Vec2 c) {
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 256; ++i) r = std::min(r, s.ray_exit(c, unit_at(2.0 * kPi * i / 256)));
  return r;
}

double raw_bubble(const ShapeSpec& s, Vec2 x) {
  if (s.is_ellipse()) {
    const Vec2 u = s.matrix().inverse() * (x - s.center());
    return std::max(0.0, 1.0 - dot(u, u));
  }
  const auto& v = s.vertices();
  double prod = 1.0;
  for (std::size_t k = 0, n = v.size(); k < n; ++k) {
    const Vec2 e = v[(k + 1) % n] - v[k];
    const double d = cross(e, x - v[k]) / norm(e);
    if (d <= 0) return 0.0;
    prod *= d;
  }
  return prod;
}

}  // namespace

double bubble(const ShapeSpec& shape, Vec2 x) {
  if (!shape.is_convex()) throw InvalidArgument("bubble function needs a convex shape");
  const double peak = raw_bubble(shape, shape.centroid());
  return raw_bubble(shape, x) / peak;
}

std::vector<std::string> builtin_names() { return {"bubble", "cone", "sine", "linear", "random:SEED"}; }

GridFunction random_bump(const ShapeSpec& shape, double h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box b = shape.bounding_box();
  const double size = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
  struct G {
    Vec2 c;
    double a, s;
  };
  std::vector<G> gs(3);
  for (auto& g : gs) {
    g.c = {b.lo.x + unit(rng) * (b.hi.x - b.lo.x), b.lo.y + unit(rng) * (b.hi.y - b.lo.y)};
    g.a = 2.0 * unit(rng);
    g.s = size * (0.1 + 0.3 * unit(rng));
  }
  const double e = 1.0 + unit(rng);
  const double peak = raw_bubble(shape, shape.centroid());
  return GridFunction::sample(shape, h, [&](Vec2 x) {
    double s = 1.0;
    for (const auto& g : gs) {
      const Vec2 d = x - g.c;
      s += g.a * std::exp(-dot(d, d) / (2.0 * g.s * g.s));
    }
    return std::pow(raw_bubble(shape, x) / peak, e) * s;
  });
}

GridFunction builtin_function(const std::string& name, const ShapeSpec& shape, double h) {
  if (name == "bubble") return GridFunction::sample(shape, h, [&](Vec2 x) { return bubble(shape, x); });
  if (name == "cone") {
    const Vec2 c = shape.centroid();
    const double r = inradius_about(shape, c);
    return GridFunction::sample(shape, h, [&](Vec2 x) { return std::max(0.0, 1.0 - norm(x - c) / r); });
  }
  if (name == "sine") {
    const Box b = shape.bounding_box();
    return GridFunction::sample(shape, h, [&](Vec2 x) {
      return std::sin(kPi * (x.x - b.lo.x) / (b.hi.x - b.lo.x)) * std::sin(kPi * (x.y - b.lo.y) / (b.hi.y - b.lo.y));
    });
  }
  if (name == "linear") return GridFunction::sample(shape, h, [](Vec2 x) { return x.x; });
  if (name.rfind("random:", 0) == 0) {
    const std::string tail = name.substr(7);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("builtin random:SEED needs a non-negative integer seed");
    return random_bump(shape, h, std::stoull(tail));
  }
  throw InvalidArgument("unknown builtin function '" + name + "'");
}

GridFunction symmetric_rearrangement(const GridFunction& f) {
  const Lattice& l = f.lattice();
  const double h = l.h;
  std::vector<double> vals;
  Vec2 centroid;
  for (int j = 0; j < l.ny; ++j)
    for (int i = 0; i < l.nx; ++i)
      if (f.mask()[l.index(i, j)]) {
        vals.push_back(std::abs(f.at(i, j)));
        centroid += l.point(i, j);
      }
  if (vals.empty()) throw InvalidArgument("rearrangement of a function with empty mask");
  centroid = centroid / static_cast<double>(vals.size());
  std::sort(vals.begin(), vals.end(), std::greater<>());
  // Center on the lattice node nearest the centroid.
  const int ci = static_cast<int>(std::lround((centroid.x - l.origin.x) / h));
  const int cj = static_cast<int>(std::lround((centroid.y - l.origin.y) / h));
  const Vec2 c = l.point(ci, cj);
  const double radius = std::sqrt(vals.size() / kPi) * h + 3.0 * h;
  const int reach = static_cast<int>(std::ceil(radius / h)) + 1;
  Lattice out{h, {c.x - reach * h, c.y - reach * h}, 2 * reach + 1, 2 * reach + 1};
  struct Node {
    double d2;
    int di, dj;
    std::size_t k;
  };
  std::vector<Node> nodes;
  for (int j = 1; j + 1 < out.ny; ++j)
    for (int i = 1; i + 1 < out.nx; ++i) {
      const int di = i - reach, dj = j - reach;
      nodes.push_back({static_cast<double>(di) * di + static_cast<double>(dj) * dj, di, dj, out.index(i, j)});
    }
  std::stable_sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.d2 < b.d2; });
  std::vector<std::uint8_t> mask(out.size(), 0);
  std::vector<double> values(out.size(), 0.0);
  for (std::size_t n = 0; n < vals.size(); ++n) {
    mask[nodes[n].k] = 1;
    values[nodes[n].k] = vals[n];
  }
  return GridFunction(out, std::move(mask), std::move(values));
}

ShapeSpec unbounded_domain() { return ShapeSpec::rectangle({0.0, 0.0}, {1.0, 2.0}); }

double unbounded_default_h() { return 1.0 / 192.0; }

GridFunction unbounded_sequence(int k, double p, double h) {
  if (k < 4) throw InvalidArgument("unbounded_sequence needs k >= 4");
  if (!(p >= 1.0)) throw InvalidArgument("unbounded_sequence needs p >= 1");
  if (!(h > 0) || h > 1.0 / (4.0 * k) * (1 + 1e-12))
    throw InvalidArgument("grid spacing too coarse to resolve 1/k features (need h <= 1/(4k))");
  const ShapeSpec domain = unbounded_domain();
  if (p == 1.0) {
    const ShapeSpec slab = ShapeSpec::rectangle({0.0, 0.0}, {1.0, 1.0 / k});
    GridFunction g = GridFunction::sample(domain, h, [&](Vec2 x) { return slab.contains(x) ? 1.0 : 0.0; });
    g.set_indicator(slab);
    return g;
  }
  const double kk = k;
  auto phi = [kk](double t) {
    if (t >= 1.0 / 3.0 && t <= 2.0 / 3.0) return 1.0;
    if ((t >= 1.0 / 3.0 - 1.0 / kk && t < 1.0 / 3.0) || (t > 2.0 / 3.0 && t <= 2.0 / 3.0 + 1.0 / kk))
      return 1.0 + kk / 6.0 - std::abs(t - 0.5) * kk;
    return 0.0;
  };
  return GridFunction::sample(domain, h, [&](Vec2 x) { return phi(x.x) * std::sin(0.5 * kPi * x.y); });
}

std::vector<CorpusItem> comparison_corpus(double p, std::uint64_t seed, double h) {
  std::vector<CorpusItem> out;
  const ShapeSpec disk = ShapeSpec::disk(1.0);
  const ShapeSpec square = ShapeSpec::rectangle({0, 0}, {1, 1});
  const ShapeSpec ellipse = ShapeSpec::ellipse(Mat2::diag(1.0, 0.5));
  const ShapeSpec triangle = ShapeSpec::polygon({{0, 0}, {1.5, 0}, {0.75, 1.3}});
  const ShapeSpec hexagon = ShapeSpec::regular_polygon(6, 0.8);
  const ShapeSpec rect = ShapeSpec::rectangle({-1, -0.5}, {1, 0.5});

  out.push_back({"radial-cone", disk, builtin_function("cone", disk, h), p});
  out.push_back({"radial-bubble", disk, builtin_function("bubble", disk, h), p});
  out.push_back({"radial-bubble-squared", disk,
                 GridFunction::sample(disk, h, [](Vec2 x) { return std::pow(1.0 - dot(x, x), 2.0); }), p});
  out.push_back({"radial-cosine", disk,
                 GridFunction::sample(disk, h, [](Vec2 x) { return std::pow(std::cos(0.5 * kPi * norm(x)), 2.0); }), p});

  const ShapeSpec bases[4] = {disk, square, ellipse, triangle};
  const char* base_names[4] = {"disk", "square", "ellipse", "triangle"};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 20; ++i) {
    const int b = i % 4;
    out.push_back({std::string("bump-") + base_names[b] + "-" + std::to_string(i), bases[b],
                   random_bump(bases[b], h, rng()), p});
  }
  const ShapeSpec extra[2] = {hexagon, rect};
  const char* extra_names[2] = {"hexagon", "rectangle"};
  for (int i = 0; i < 8; ++i) {
    const int b = i % 2;
    out.push_back({std::string("bump-") + extra_names[b] + "-" + std::to_string(i), extra[b],
                   random_bump(extra[b], h, rng()), p});
  }
  // Sheared bumps: a bump on the base shape composed with the inverse shear.
  const double shears[3] = {1.0, -1.0, 0.5};
  for (int i = 0; i < 12; ++i) {
    const int b = i % 4;
    const Mat2 a = Mat2::shear(shears[i % 3]);
    const Mat2 ainv = a.inverse();
    const ShapeSpec base = bases[b];
    const ShapeSpec sheared = base.transformed(a);
    std::mt19937_64 local(rng());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Box bb = base.bounding_box();
    const Vec2 c = {bb.lo.x + (0.3 + 0.4 * unit(local)) * (bb.hi.x - bb.lo.x),
                    bb.lo.y + (0.3 + 0.4 * unit(local)) * (bb.hi.y - bb.lo.y)};
    const double s = 0.15 + 0.2 * unit(local);
    out.push_back({std::string("sheared-bump-") + base_names[b] + "-" + std::to_string(i), sheared,
                   GridFunction::sample(sheared, h,
                                        [&](Vec2 x) {
                                          const Vec2 y = ainv * x;
                                          const Vec2 d = y - c;
                                          return bubble(base, y) * (1.0 + std::exp(-dot(d, d) / (2 * s * s)));
                                        }),
                   p});
  }
  const int ks[6] = {4, 6, 8, 12, 16, 24};
  for (int k : ks)
    out.push_back({std::string(p == 1.0 ? "slab-" : "ramp-") + std::to_string(k), unbounded_domain(),
                   unbounded_sequence(k, p), p});
  return out;
}

}  // namespace affeig
