#include "affeig/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "affeig/body.hpp"
#include "affeig/cheeger.hpp"
#include "affeig/constants.hpp"
#include "affeig/eigensolver.hpp"
#include "affeig/energy.hpp"
#include "affeig/errors.hpp"
#include "affeig/functions.hpp"

namespace affeig {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Relative margin of lhs <= rhs.
void le(VerificationReport& r, double lhs, double rhs, double tol) {
  r.relation = "lhs <= rhs";
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = (rhs - lhs) / std::abs(rhs);
  r.tolerance = tol;
}

// Relative margin of lhs > rhs, no slack.
void gt(VerificationReport& r, double lhs, double rhs) {
  r.relation = "lhs > rhs";
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = (lhs - rhs) / std::abs(rhs);
  r.tolerance = 0.0;
  r.strict = true;
}

// Two-sided relative agreement.
void eq(VerificationReport& r, double lhs, double rhs, double tol) {
  r.relation = "lhs == rhs";
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = -std::abs(lhs - rhs) / std::abs(rhs);
  r.tolerance = tol;
}

VerificationReport finish(VerificationReport r) {
  const bool measured = (std::isfinite(r.lhs) && r.lhs > 0.0) || (std::isfinite(r.rhs) && r.rhs > 0.0);
  if (!std::isfinite(r.margin)) {
    r.pass = false;
  } else {
    r.pass = r.strict ? r.margin > 0.0 : r.margin >= -r.tolerance;
  }
  if (!measured) {
    r.pass = false;
    r.note += r.note.empty() ? "no positive measured quantity" : "; no positive measured quantity";
  }
  return r;
}

std::vector<Vec2> hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
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

ShapeSpec random_symmetric_polygon(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(3, 7);
  std::uniform_real_distribution<double> angle(0.0, kPi), radius(0.5, 1.5);
  std::vector<Vec2> pts;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const Vec2 x = unit_at(angle(rng)) * radius(rng);
    pts.push_back(x);
    pts.push_back(-x);
  }
  return ShapeSpec::polygon(hull(std::move(pts)));
}

Mat2 random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), logdet(std::log(0.25), std::log(4.0));
  for (;;) {
    Mat2 a{u(rng), u(rng), u(rng), u(rng)};
    const double d = a.det();
    if (std::abs(d) < 0.05) continue;
    const double target = std::exp(logdet(rng));
    return a * std::sqrt(target / std::abs(d));
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

const ToleranceTable& tolerances() {
  static const ToleranceTable table;
  return table;
}

void VerifyOptions::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be >= 1");
  if (!(h > 0.0)) throw InvalidArgument("grid spacing h must be positive");
  for (int m : {directions, corpus_directions, corpus_directions_p1, geometry_directions})
    if (m < 4 || m % 4 != 0) throw InvalidArgument("direction count must be a positive multiple of 4");
  if (!(tol_rel > 0.0)) throw InvalidArgument("tol_rel must be positive");
  if (ks.size() < 2) throw InvalidArgument("unboundedness needs at least two k values");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"comparison", "poincare",   "faber-krahn", "lambda",
                                                 "invariance", "unbounded", "geometry"};
  return names;
}

std::vector<std::pair<std::string, ShapeSpec>> equal_area_shapes() {
  const double side = std::sqrt(kPi);
  const double long_side = std::sqrt(2.0 * kPi), short_side = std::sqrt(0.5 * kPi);
  const double tri = std::sqrt(4.0 * kPi / std::sqrt(3.0));
  const double height = tri * std::sqrt(3.0) / 2.0;
  return {
      {"disk", ShapeSpec::disk(1.0)},
      {"sheared-disk", ShapeSpec::disk(1.0).transformed(Mat2::shear(1.0))},
      {"square", ShapeSpec::rectangle({-0.5 * side, -0.5 * side}, {0.5 * side, 0.5 * side})},
      {"rectangle-2:1", ShapeSpec::rectangle({-0.5 * long_side, -0.5 * short_side}, {0.5 * long_side, 0.5 * short_side})},
      {"triangle", ShapeSpec::polygon({{-0.5 * tri, -height / 3.0}, {0.5 * tri, -height / 3.0}, {0.0, 2.0 * height / 3.0}})},
  };
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

Verifier::Verifier(VerifyOptions opts) : opts_(std::move(opts)) { opts_.validate(); }

VerificationReport Verifier::base(const std::string& suite, const std::string& check, const std::string& shape) const {
  VerificationReport r;
  r.suite = suite;
  r.check = check;
  r.shape = shape;
  r.p = opts_.p;
  r.h = opts_.h;
  r.directions = opts_.directions;
  r.seed = opts_.seed;
  return r;
}

double Verifier::affine_lambda(const std::string& name, const ShapeSpec& shape, double h) {
  const std::string key = "affine/" + name + "/" + fmt(h);
  for (const auto& c : cache_)
    if (c.key == key) return c.lambda;
  SolveOptions o;
  o.p = opts_.p;
  o.h = h;
  o.directions = opts_.directions;
  o.tol_rel = opts_.tol_rel;
  o.seed = opts_.seed;
  const double l = minimize_rayleigh(shape, o).lambda;
  cache_.push_back({key, l});
  return l;
}

double Verifier::classical_lambda(const std::string& name, const ShapeSpec& shape, double h) {
  const std::string key = "classical/" + name + "/" + fmt(h);
  for (const auto& c : cache_)
    if (c.key == key) return c.lambda;
  SolveOptions o;
  o.p = opts_.p;
  o.h = h;
  o.directions = opts_.directions;
  o.tol_rel = opts_.tol_rel;
  o.seed = opts_.seed;
  o.mode = SolveMode::Classical;
  const double l = opts_.p == 2.0 ? classical_eigen_oracle(shape, h) : minimize_rayleigh(shape, o).lambda;
  cache_.push_back({key, l});
  return l;
}

std::vector<VerificationReport> Verifier::comparison() {
  const auto& tol = tolerances();
  const double p = opts_.p;
  const DirectionSet dirs = DirectionSet::uniform(p == 1.0 ? opts_.corpus_directions_p1 : opts_.corpus_directions);
  std::vector<VerificationReport> out;
  for (const CorpusItem& item : comparison_corpus(p, opts_.seed, opts_.h)) {
    const EnergyBreakdown e = affine_energy(item.f, p, dirs);
    VerificationReport up = base("comparison", "energy-below-gradient-norm", item.name);
    up.h = item.f.h();
    up.directions = dirs.size();
    le(up, e.energy, e.grad_norm, tol.corpus_slack);
    out.push_back(finish(up));

    const double c = constants::reverse_zhang_constants(2, p, max_width(item.shape)).domain_dependent;
    VerificationReport rev = base("comparison", "reverse-comparison", item.name);
    rev.h = item.f.h();
    rev.directions = dirs.size();
    le(rev, c * std::sqrt(e.lp_norm * e.grad_norm), e.energy, tol.corpus_slack);
    out.push_back(finish(rev));
  }
  return out;
}

std::vector<VerificationReport> Verifier::poincare(const std::string& name, const ShapeSpec& shape) {
  const auto& tol = tolerances();
  const double p = opts_.p;
  SolveOptions o;
  o.p = p;
  o.h = opts_.h;
  o.directions = opts_.directions;
  o.tol_rel = opts_.tol_rel;
  o.seed = opts_.seed;
  const EigenResult res = minimize_rayleigh(shape, o);
  const DirectionSet dirs = DirectionSet::uniform(opts_.directions);
  std::vector<VerificationReport> out;

  VerificationReport self = base("poincare", "minimizer-attains-eigenvalue", name);
  eq(self, rayleigh_affine(res.minimizer, p, dirs), res.lambda, tol.minimizer);
  out.push_back(finish(self));

  VerificationReport scaled = base("poincare", "scaled-minimizer-attains-eigenvalue", name);
  eq(scaled, rayleigh_affine(res.minimizer.scaled(3.0), p, dirs), res.lambda, tol.minimizer);
  out.push_back(finish(scaled));

  for (int i = 0; i < 20; ++i) {
    const GridFunction f = random_bump(shape, opts_.h, opts_.seed * 1000 + 17 + i);
    VerificationReport r = base("poincare", "random-function-quotient", name);
    r.note = "bump " + std::to_string(i);
    le(r, res.lambda, rayleigh_affine(f, p, dirs), tol.poincare);
    out.push_back(finish(r));
  }
  return out;
}

std::vector<VerificationReport> Verifier::faber_krahn() {
  const auto& tol = tolerances();
  const auto shapes = equal_area_shapes();
  std::vector<double> aff, cla;
  for (const auto& [name, s] : shapes) {
    aff.push_back(affine_lambda(name, s, opts_.h));
    cla.push_back(classical_lambda(name, s, opts_.h));
  }
  const double disk = aff[0];
  std::vector<VerificationReport> out;
  for (std::size_t i = 1; i < shapes.size(); ++i) {
    VerificationReport r = base("faber-krahn", "disk-minimizes-affine-eigenvalue", shapes[i].first);
    le(r, disk, aff[i], tol.solver);
    out.push_back(finish(r));
  }
  VerificationReport same = base("faber-krahn", "ellipse-matches-disk", "sheared-disk");
  eq(same, aff[1], disk, tol.solver);
  out.push_back(finish(same));
  for (std::size_t i = 2; i < shapes.size(); ++i) {
    VerificationReport r = base("faber-krahn", "non-ellipse-gap", shapes[i].first);
    r.note = "relative gap to the disk must exceed " + fmt(tol.gap_factor * tol.solver);
    gt(r, aff[i] / disk - 1.0, tol.gap_factor * tol.solver);
    out.push_back(finish(r));
  }
  VerificationReport contrast = base("faber-krahn", "classical-ellipse-above-disk", "sheared-disk");
  gt(contrast, cla[1], cla[0]);
  out.push_back(finish(contrast));
  return out;
}

std::vector<VerificationReport> Verifier::lambda_properties() {
  const auto& tol = tolerances();
  const double p = opts_.p;
  const double alpha = std::pow(constants::huang_li_constant(2, p), p);
  const double stretches[] = {0.5, 0.75, 1.0, 1.33, 2.0};
  const double shears[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<VerificationReport> out;
  for (const auto& [name, s] : equal_area_shapes()) {
    const double la = affine_lambda(name, s, opts_.h);
    const double lc = classical_lambda(name, s, opts_.h);

    VerificationReport a = base("lambda", "affine-below-classical", name);
    le(a, la, lc, tol.solver);
    out.push_back(finish(a));

    const double c = constants::reverse_zhang_constants(2, p, max_width(s)).domain_dependent;
    VerificationReport b = base("lambda", "affine-above-reverse-bound", name);
    gt(b, la, std::pow(c, p) * std::sqrt(lc));
    out.push_back(finish(b));

    double best = lc;
    for (double st : stretches)
      for (double sh : shears) {
        if (st == 1.0 && sh == 0.0) continue;
        const Mat2 t = Mat2::diag(st, 1.0 / st) * Mat2::shear(sh);
        const std::string tname = name + "/T(" + fmt(st) + "," + fmt(sh) + ")";
        best = std::min(best, classical_lambda(tname, s.transformed(t), opts_.h));
      }
    VerificationReport cc = base("lambda", "affine-above-sampled-sl2-minimum", name);
    cc.note = "minimum over 25 sampled stretch/shear maps";
    le(cc, alpha * best, la, tol.solver);
    out.push_back(finish(cc));
  }
  return out;
}

std::vector<VerificationReport> Verifier::invariance(const std::string& name, const ShapeSpec& shape) {
  const auto& tol = tolerances();
  std::vector<VerificationReport> out;
  for (double sh : opts_.shears) {
    const bool fine = std::abs(sh) > 1.0;
    const double h = fine ? 0.5 * opts_.h : opts_.h;
    const ShapeSpec moved = shape.transformed(Mat2::shear(sh));
    const std::string mname = name + "/shear(" + fmt(sh) + ")";
    const double a0 = affine_lambda(name, shape, h), a1 = affine_lambda(mname, moved, h);
    VerificationReport r = base("invariance", "affine-eigenvalue-unchanged", mname);
    r.h = h;
    eq(r, a1, a0, fine ? tol.solver_fine : tol.solver);
    out.push_back(finish(r));
    if (sh == 1.0) {
      const double c0 = classical_lambda(name, shape, h), c1 = classical_lambda(mname, moved, h);
      VerificationReport c = base("invariance", "classical-eigenvalue-moves", mname);
      c.h = h;
      c.relation = "|lhs/rhs - 1| >= contrast";
      c.lhs = c1;
      c.rhs = c0;
      c.margin = std::abs(c1 / c0 - 1.0) - tol.contrast;
      c.tolerance = 0.0;
      c.note = "classical spread must exceed " + fmt(tol.contrast);
      out.push_back(finish(c));
    }
  }
  return out;
}

std::vector<VerificationReport> Verifier::unboundedness() {
  const auto& tol = tolerances();
  const double p = opts_.p;
  const double h = std::min(unbounded_default_h(), 1.0 / (4.0 * *std::max_element(opts_.ks.begin(), opts_.ks.end())));
  const DirectionSet dirs = DirectionSet::uniform(opts_.corpus_directions);
  std::vector<double> ks, ratios;
  std::vector<VerificationReport> out;
  for (int k : opts_.ks) {
    const GridFunction f = unbounded_sequence(k, p, h);
    const EnergyBreakdown e = affine_energy(f, p, dirs);
    ks.push_back(k);
    ratios.push_back(e.grad_norm / e.energy);
  }
  for (std::size_t i = 1; i < ks.size(); ++i) {
    VerificationReport r = base("unbounded", "ratio-increases", "k=" + std::to_string(static_cast<int>(ks[i])));
    r.h = h;
    r.directions = dirs.size();
    gt(r, ratios[i], ratios[i - 1]);
    out.push_back(finish(r));
  }
  const double target = p == 1.0 ? 0.5 : 0.5 * (p - 1.0) / p;
  VerificationReport s = base("unbounded", "log-log-slope", "slab/ramp sequence");
  s.h = h;
  s.directions = dirs.size();
  s.relation = "|lhs - rhs| <= band * rhs";
  s.lhs = fit_slope(ks, ratios);
  s.rhs = target;
  s.margin = -std::abs(s.lhs - target) / target;
  s.tolerance = tol.slope;
  out.push_back(finish(s));
  return out;
}

std::vector<VerificationReport> Verifier::geometry() {
  const auto& tol = tolerances();
  const DirectionSet dirs = DirectionSet::uniform(opts_.geometry_directions);
  const double bound = kPi * kPi;
  std::mt19937_64 rng(opts_.seed);
  std::vector<std::pair<std::string, ShapeSpec>> bodies;
  for (int i = 0; i < 20; ++i) bodies.push_back({"polygon-" + std::to_string(i), random_symmetric_polygon(rng)});
  bodies.push_back({"square", ShapeSpec::rectangle({-1, -1}, {1, 1})});
  const std::vector<std::pair<std::string, ShapeSpec>> ellipses = {
      {"ellipse-disk", ShapeSpec::disk(1.0)},
      {"ellipse-2x0.5", ShapeSpec::ellipse(Mat2::diag(2.0, 0.5))},
      {"ellipse-rotated", ShapeSpec::ellipse(Mat2{1.5, 0.4, 0.4, 0.7})},
      {"ellipse-sheared", ShapeSpec::disk(1.0).transformed(Mat2::shear(1.0))},
  };
  std::vector<VerificationReport> out;
  auto body_checks = [&](const std::string& name, const ShapeSpec& s, bool is_ellipse) {
    const ConvexBody k = ConvexBody::from_shape(dirs, s);
    VerificationReport r = base("geometry", "santalo-bound", name);
    r.directions = dirs.size();
    r.h = 0.0;
    le(r, santalo_product(k), bound, tol.santalo);
    if (is_ellipse) r.note = std::abs(r.margin) <= tol.santalo ? "equality" : "equality expected but not attained";
    out.push_back(finish(r));
    VerificationReport b = base("geometry", "busemann-petty", name);
    b.directions = dirs.size();
    b.h = 0.0;
    b.relation = "vol(centroid body) / vol - 1 >= 0";
    const double m = busemann_petty_margin(k, opts_.p);
    b.rhs = model_volume(k);
    b.lhs = (1.0 + m) * b.rhs;
    b.margin = m;
    b.tolerance = tol.busemann_petty;
    if (is_ellipse) b.note = std::abs(m) <= tol.busemann_petty ? "equality" : "equality expected but not attained";
    out.push_back(finish(b));
  };
  for (const auto& [n, s] : bodies) body_checks(n, s, false);
  for (const auto& [n, s] : ellipses) body_checks(n, s, true);

  // Characteristic functions of convex sets.
  for (double r : {0.5, 1.0, 2.0}) {
    const ShapeSpec d = ShapeSpec::disk(r);
    VerificationReport c = base("geometry", "cheeger-disk-classical", "disk r=" + fmt(r));
    c.p = 1.0;
    c.h = 0.0;
    eq(c, classical_cheeger_ratio(d), 2.0 / r, tol.cheeger_exact);
    out.push_back(finish(c));
    VerificationReport a = base("geometry", "cheeger-disk-affine", "disk r=" + fmt(r));
    a.p = 1.0;
    a.h = 0.0;
    eq(a, affine_cheeger_ratio(d), 2.0 / r, tol.cheeger_disk);
    out.push_back(finish(a));
  }
  std::mt19937_64 mrng(opts_.seed + 1);
  const ShapeSpec probe = random_symmetric_polygon(mrng);
  for (int i = 0; i < 20; ++i) {
    const Mat2 m = random_matrix(mrng);
    VerificationReport r = base("geometry", "cheeger-det-scaling", "polygon/matrix-" + std::to_string(i));
    r.p = 1.0;
    r.h = 0.0;
    const double predicted = affine_cheeger_ratio(probe) / std::sqrt(std::abs(m.det()));
    eq(r, affine_cheeger_ratio(apply_linear(probe, m)), predicted, tol.identity);
    out.push_back(finish(r));
  }
  std::vector<std::pair<std::string, ShapeSpec>> sets = bodies;
  for (const auto& [n, s] : ellipses) sets.push_back({n, s.polygonize(256)});
  for (int j = 0; j < 32; j += 4) sets.push_back({"rounded-square-" + std::to_string(j), rounded_square(j / 31.0)});
  sets.push_back({"triangle", ShapeSpec::polygon({{0, 0}, {1.5, 0}, {0.75, 1.3}})});
  for (const auto& [n, s] : sets) {
    VerificationReport r = base("geometry", "cheeger-affine-below-classical", n);
    r.p = 1.0;
    r.h = 0.0;
    le(r, affine_cheeger_ratio(s), classical_cheeger_ratio(s), tol.corpus_slack);
    out.push_back(finish(r));
  }
  CheegerOptions co;
  co.budget = 512;
  co.position_tolerance = tol.position;
  for (const auto& [n, s] : std::vector<std::pair<std::string, ShapeSpec>>{
           {"disk", ShapeSpec::disk(1.0)}, {"square", ShapeSpec::rectangle({0, 0}, {1, 1})}}) {
    const CheegerReport rep = cheeger_search(s, co);
    VerificationReport r = base("geometry", "cheeger-winner-maximal-position", n);
    r.p = 1.0;
    r.h = 0.0;
    r.relation = "winner area >= best affine image area";
    r.lhs = rep.affine_best.set.area();
    r.rhs = rep.position.volume;
    r.margin = r.lhs / r.rhs - 1.0;
    r.tolerance = tol.position;
    r.note = "winner family " + rep.affine_best.family + ", checked within the search grid only";
    out.push_back(finish(r));
  }
  return out;
}

std::vector<VerificationReport> Verifier::run(const std::string& suite) {
  std::vector<VerificationReport> out;
  auto append = [&](std::vector<VerificationReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  const bool all = suite == "all";
  bool known = all;
  for (const auto& n : suite_names()) known = known || n == suite;
  if (!known) throw InvalidArgument("unknown suite '" + suite + "'");
  if (all || suite == "comparison") append(comparison());
  if (opts_.p > 1.0) {
    if (all || suite == "poincare") {
      append(poincare("disk", ShapeSpec::disk(1.0)));
      append(poincare("square", ShapeSpec::rectangle({0, 0}, {1, 1})));
    }
    if (all || suite == "faber-krahn") append(faber_krahn());
    if (all || suite == "lambda") append(lambda_properties());
    if (all || suite == "invariance") {
      const auto shapes = equal_area_shapes();
      append(invariance(shapes[0].first, shapes[0].second));
      append(invariance(shapes[2].first, shapes[2].second));
    }
  } else if (!all && suite != "comparison" && suite != "unbounded" && suite != "geometry") {
    throw InvalidArgument("suite '" + suite + "' needs p > 1");
  }
  if (all || suite == "unbounded") append(unboundedness());
  if (all || suite == "geometry") append(geometry());
  return out;
}

}  // namespace affeig
