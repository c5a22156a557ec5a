#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "affeig/cheeger.hpp"
#include "affeig/eigensolver.hpp"
#include "affeig/errors.hpp"
#include "affeig/shape.hpp"
#include "doctest.h"

using namespace affeig;

namespace {

constexpr double kPi = std::numbers::pi;

const ShapeSpec kUnitSquare = ShapeSpec::rectangle({0.0, 0.0}, {1.0, 1.0});

// Random matrix with |det| in [0.25, 4], mixing rotations, stretches, shears and reflections.
Mat2 random_gl2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), logdet(std::log(0.25), std::log(4.0)),
      stretch(-1.0, 1.0), shear(-1.5, 1.5);
  const double s = std::exp(0.5 * logdet(rng)), t = std::exp(stretch(rng));
  Mat2 a = Mat2::rotation(angle(rng)) * Mat2::diag(s * t, s / t) * Mat2::shear(shear(rng));
  if (rng() % 2) a = a * Mat2::diag(1.0, -1.0);
  return a;
}

std::vector<ShapeSpec> candidate_corpus() {
  return {ShapeSpec::disk(1.0),
          ShapeSpec::disk(0.3, {0.2, -0.1}),
          kUnitSquare,
          ShapeSpec::rectangle({-1.0, -0.25}, {1.0, 0.25}),
          ShapeSpec::regular_polygon(3, 1.0),
          ShapeSpec::regular_polygon(6, 1.0, 0.3),
          ShapeSpec::polygon({{0.0, 0.0}, {2.0, 0.0}, {2.5, 1.0}, {0.3, 1.4}}),
          ShapeSpec::ellipse(Mat2::diag(2.0, 0.5)),
          rounded_square(0.5),
          rounded_square(1.0, 16)};
}

// Classical ratio of the set the affine ratio actually measures.
double measured_classical(const ShapeSpec& c) {
  return classical_cheeger_ratio(c.is_ellipse() ? c.polygonize(256) : c);
}

}  // namespace

TEST_SUITE("cheeger") {
  TEST_CASE("classical ratio is exact for disks and squares") {
    for (double r : {0.25, 1.0, 3.0}) CHECK(std::abs(classical_cheeger_ratio(ShapeSpec::disk(r)) - 2.0 / r) <= 1e-12 * (2.0 / r));
    CHECK(classical_cheeger_ratio(kUnitSquare) == doctest::Approx(4.0).epsilon(1e-14));
    for (double lam : {0.5, 2.0, 7.0}) {
      const ShapeSpec big = kUnitSquare.transformed(Mat2::diag(lam, lam));
      CHECK(classical_cheeger_ratio(big) == doctest::Approx(4.0 / lam).epsilon(1e-13));
    }
  }

  TEST_CASE("degenerate sets are rejected") {
    CHECK_THROWS_AS(classical_cheeger_ratio(ShapeSpec::disk(0.0)), InvalidArgument);
  }

  TEST_CASE("affine ratio of a polygonized disk converges to 2/r") {
    for (double r : {0.5, 1.0, 2.0}) {
      const double a256 = affine_cheeger_ratio(ShapeSpec::disk(r), 256);
      const double a512 = affine_cheeger_ratio(ShapeSpec::disk(r), 512);
      CHECK(std::abs(a256 - 2.0 / r) <= 0.01 * 2.0 / r);
      CHECK(std::abs(a512 - 2.0 / r) < std::abs(a256 - 2.0 / r));
      CHECK(std::abs(a512 - a256) < 0.002 * a256);
    }
  }

  TEST_CASE("ellipse resolution guard") {
    for (const ShapeSpec& e : {ShapeSpec::ellipse(Mat2::diag(2.0, 0.5)), ShapeSpec::ellipse(Mat2{1.0, 0.4, 0.4, 0.7})}) {
      const double a256 = affine_cheeger_ratio(e, 256), a512 = affine_cheeger_ratio(e, 512);
      CHECK(std::abs(a512 - a256) < 0.002 * a256);
    }
  }

  TEST_CASE("det scaling over random matrices") {
    std::mt19937_64 rng(7);
    const std::vector<ShapeSpec> sets = {kUnitSquare, ShapeSpec::regular_polygon(5, 1.0),
                                         ShapeSpec::polygon({{0.0, 0.0}, {2.0, 0.0}, {2.5, 1.0}, {0.3, 1.4}}),
                                         ShapeSpec::disk(1.0)};
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
      const Mat2 a = random_gl2(rng);
      REQUIRE(std::abs(a.det()) >= 0.25 - 1e-12);
      REQUIRE(std::abs(a.det()) <= 4.0 + 1e-12);
      const ShapeSpec& c = sets[i % sets.size()];
      CHECK(det_scaling_defect(c, a) <= 1e-6);
      const double direct = affine_cheeger_ratio(c.transformed(a));
      CHECK(std::abs(direct - affine_cheeger_ratio(c) / std::sqrt(std::abs(a.det()))) <= 1e-6 * direct);
      ++checked;
    }
    CHECK(checked == 20);
  }

  TEST_CASE("affine ratio never exceeds the classical one") {
    for (const ShapeSpec& c : candidate_corpus()) {
      const double h = measured_classical(c), ha = affine_cheeger_ratio(c);
      CHECK(ha > 0.0);
      CHECK(ha <= h + 1e-8);
    }
  }

  TEST_CASE("family names round trip") {
    for (auto f : {CandidateFamily::Disk, CandidateFamily::Ellipse, CandidateFamily::RoundedSquare,
                   CandidateFamily::AffineTemplate, CandidateFamily::All})
      CHECK(parse_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_family("blob"), InvalidArgument);
  }

  TEST_CASE("rounded squares interpolate between square and disk") {
    CHECK(rounded_square(0.0).area() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rounded_square(0.0).perimeter() == doctest::Approx(8.0).epsilon(1e-12));
    const ShapeSpec round = rounded_square(1.0, 256);
    CHECK(round.area() == doctest::Approx(kPi).epsilon(1e-3));
    CHECK(round.is_convex());
  }

  TEST_CASE("search inside a disk finds the full disk") {
    const ShapeSpec dom = ShapeSpec::disk(1.5, {0.3, -0.2});
    for (auto fam : {CandidateFamily::Disk, CandidateFamily::Ellipse, CandidateFamily::All}) {
      CheegerOptions o;
      o.family = fam;
      const CheegerReport r = cheeger_search(dom, o);
      CHECK(r.classical_best.classical_ratio == doctest::Approx(2.0 / 1.5).epsilon(1e-3));
      CHECK(r.affine_best.affine_ratio == doctest::Approx(2.0 / 1.5).epsilon(0.01));
      CHECK(r.affine_best.affine_ratio <= measured_classical(r.affine_best.set) + 1e-8);
      CHECK(r.position_ok);
      CHECK(r.evaluated > 0);
    }
  }

  TEST_CASE("search inside the unit square prefers the rounded square") {
    CheegerOptions o;
    const CheegerReport r = cheeger_search(kUnitSquare, o);
    CHECK(r.classical_best.family == "rounded-square");
    // Known Cheeger constant of the unit square: (4 - pi) / (2 - sqrt(pi)) = 2 + sqrt(pi).
    const double exact = 2.0 + std::sqrt(kPi);
    CHECK(std::abs(exact - (4.0 - kPi) / (2.0 - std::sqrt(kPi))) <= 1e-12);
    CHECK(r.classical_best.classical_ratio >= exact - 1e-9);
    CHECK(r.classical_best.classical_ratio <= exact * (1.0 + 1e-3));
    CHECK(r.affine_best.affine_ratio <= r.classical_best.classical_ratio + 1e-8);
    CHECK(r.position_ok);
    CHECK(r.position_ratio >= 1.0 - o.position_tolerance);
    // The winner fits inside the domain.
    for (const Vec2& v : r.classical_best.set.vertices()) {
      CHECK(std::min(v.x, v.y) >= -1e-9);
      CHECK(std::max(v.x, v.y) <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("search is det-covariant under affine maps of the domain") {
    const Mat2 a = Mat2::shear(0.7) * Mat2::diag(1.8, 0.9);
    const double k = 1.0 / std::sqrt(std::abs(a.det()));
    for (const ShapeSpec& dom : {kUnitSquare, ShapeSpec::regular_polygon(6, 1.0)}) {
      CheegerOptions o;
      o.family = CandidateFamily::AffineTemplate;
      const double base = cheeger_search(dom, o).affine_best.affine_ratio;
      const double mapped = cheeger_search(dom.transformed(a, {0.4, -1.0}), o).affine_best.affine_ratio;
      CHECK(std::abs(mapped - k * base) <= 1e-3 * mapped);
    }
  }

  TEST_CASE("search is deterministic and validates its input") {
    CheegerOptions o;
    o.budget = 512;
    const CheegerReport a = cheeger_search(kUnitSquare, o), b = cheeger_search(kUnitSquare, o);
    CHECK(a.classical_best.classical_ratio == b.classical_best.classical_ratio);
    CHECK(a.affine_best.affine_ratio == b.affine_best.affine_ratio);
    CHECK(a.affine_best.params == b.affine_best.params);
    o.budget = 0;
    CHECK_THROWS_AS(cheeger_search(kUnitSquare, o), InvalidArgument);
    CHECK_THROWS_AS(cheeger_search(ShapeSpec::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), {}), InvalidArgument);
  }

  TEST_CASE("eigenvalue roots decrease toward the Cheeger regime as p falls") {
    // Near p = 1 the solver stalls on its residual; a bounded run still gives an upper bound.
    for (const ShapeSpec& dom : {ShapeSpec::disk(1.0), kUnitSquare}) {
      CheegerOptions co;
      const double best = cheeger_search(dom, co).affine_best.affine_ratio;
      double prev = std::numeric_limits<double>::infinity();
      for (double p : {1.5, 1.25, 1.1}) {
        SolveOptions o;
        o.p = p;
        o.h = 1.0 / 32.0;
        o.max_iterations = 150;
        const EigenResult r = minimize_rayleigh(dom, o);
        const double root = std::pow(r.lambda, 1.0 / p);
        CHECK(root < prev);
        CHECK(root > best);
        prev = root;
      }
    }
  }
}
