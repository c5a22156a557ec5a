#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "affeig/eigensolver.hpp"
#include "affeig/functions.hpp"
#include "affeig/operators.hpp"
#include "doctest.h"

using namespace affeig;

namespace {

constexpr double kPi = std::numbers::pi;
const ShapeSpec kUnit = ShapeSpec::rectangle({0, 0}, {1, 1});
const ShapeSpec kDisk = ShapeSpec::disk(1.0);

double paraboloid(Vec2 x) { return std::max(0.0, 1.0 - dot(x, x)); }

GridFunction sine(double h) {
  return GridFunction::sample(kUnit, h, [](Vec2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); });
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

// Nodes at least `ring` lattice steps away from any exterior node.
bool deep_inside(const GridFunction& f, int i, int j, int ring) {
  const Lattice& l = f.lattice();
  for (int dj = -ring; dj <= ring; ++dj)
    for (int di = -ring; di <= ring; ++di) {
      const int a = i + di, b = j + dj;
      if (a < 0 || b < 0 || a >= l.nx || b >= l.ny || !f.mask()[l.index(a, b)]) return false;
    }
  return true;
}

double tilted(Vec2 x) { return paraboloid(x) * (1.2 + x.x); }

// Smooth test function supported in |y| < 0.7.
double probe(Vec2 y) {
  const double t = std::max(0.0, 0.49 - dot(y, y));
  return t * t * (1.0 + y.y);
}

struct Transport {
  double pointwise;  // max nodal defect over |y| < 0.7, relative to the max of the reference
  double weak;       // defect of the pairing with probe(), relative
};

// Compares op(f_A)(x) with op_A(f)(Ax) for f_A(x) = f(Ax), A = shear(s).
template <class Op, class OpA>
Transport transport(double s, double h, Op op, OpA op_a) {
  const Mat2 a = Mat2::shear(s);
  const GridFunction f = GridFunction::sample(kDisk, h, tilted);
  const GridFunction fa = GridFunction::sample(kDisk.transformed(a.inverse()), h, [&](Vec2 x) { return tilted(a * x); });
  const GridFunction ref = op_a(f);
  const GridFunction got = op(fa);
  const Lattice& l = fa.lattice();
  const Lattice& lo = f.lattice();
  double err = 0.0, scale = 0.0, w_got = 0.0, w_ref = 0.0;
  for (int j = 0; j < l.ny; ++j)
    for (int i = 0; i < l.nx; ++i) {
      const Vec2 y = a * l.point(i, j);
      w_got += got.at(i, j) * probe(y);
      if (norm(y) > 0.7) continue;
      const int io = static_cast<int>(std::lround((y.x - lo.origin.x) / h));
      const int jo = static_cast<int>(std::lround((y.y - lo.origin.y) / h));
      err = std::max(err, std::abs(got.at(i, j) - ref.at(io, jo)));
      scale = std::max(scale, std::abs(ref.at(io, jo)));
    }
  for (int j = 0; j < lo.ny; ++j)
    for (int i = 0; i < lo.nx; ++i) w_ref += ref.at(i, j) * probe(lo.point(i, j));
  return {err / scale, std::abs(w_got / w_ref - 1.0)};
}

// O(h) with a fixed constant on both grids.
void check_first_order(double coarse, double fine, double constant) {
  CHECK(coarse <= constant / 32);
  CHECK(fine <= constant / 64);
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("H is 1-homogeneous and satisfies the Euler identity") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    const GridFunction f = random_bump(kDisk, 1.0 / 32, 2);
    for (double p : {1.5, 2.0, 3.0}) {
      const OperatorContext ctx(f, p, DirectionSet::uniform(64));
      CHECK(H_value(ctx, {0, 0}) == 0.0);
      CHECK(H_gradient(ctx, {0, 0}) == Vec2{});
      for (int i = 0; i < 50; ++i) {
        const Vec2 v{n(rng), n(rng)};
        const double hv = H_value(ctx, v);
        CHECK(H_value(ctx, 2.0 * v) == doctest::Approx(2.0 * hv).epsilon(1e-12));
        CHECK(dot(H_gradient(ctx, v), v) == doctest::Approx(hv).epsilon(1e-12));
        const Vec2 g1 = H_gradient(ctx, v), g3 = H_gradient(ctx, 3.0 * v);
        CHECK(norm(g1 - g3) <= 1e-12 * norm(g1));
      }
    }
  }

  TEST_CASE("radial functions have the unit disk as G") {
    const GridFunction f = GridFunction::sample(kDisk, 1.0 / 64, paraboloid);
    for (double p : {1.5, 2.0, 3.0}) {
      const OperatorContext ctx(f, p, DirectionSet::uniform(64));
      for (Vec2 v : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 0}, Vec2{0, -1}}) CHECK(H_value(ctx, v) == doctest::Approx(1.0).epsilon(1e-4));
      const ConvexBody g = body_G(ctx);
      for (double s : g.support()) CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
    }
  }

  TEST_CASE("body G matches H and transforms with the function") {
    const DirectionSet d = DirectionSet::uniform(64);
    const GridFunction f = random_bump(kDisk, 1.0 / 32, 5);
    const OperatorContext ctx(f, 2.0, d);
    const ConvexBody g = body_G(ctx);
    for (int i = 0; i < d.size(); ++i) CHECK(g.support()[i] == doctest::Approx(H_value(ctx, d.node(i))).epsilon(1e-8));

    const ConvexBody gs = body_G(OperatorContext(f.scaled(2.5), 2.0, d));
    for (int i = 0; i < d.size(); ++i) CHECK(gs.support()[i] == doctest::Approx(g.support()[i]).epsilon(1e-12));

    // G of f_A(x) = f(Ax) is A^{-1} G_f, up to a first-order mesh defect.
    for (double sh : {-1.0, 1.0}) {
      const Mat2 a = Mat2::shear(sh);
      for (double h : {1.0 / 32, 1.0 / 64}) {
        const GridFunction p0 = GridFunction::sample(kDisk, h, tilted);
        const GridFunction pa = GridFunction::sample(kDisk.transformed(a.inverse()), h, [&](Vec2 x) { return tilted(a * x); });
        const ConvexBody expected = body_G(OperatorContext(p0, 2.0, d)).transformed(a.inverse());
        const ConvexBody ga = body_G(OperatorContext(pa, 2.0, d));
        double err = 0.0;
        for (int i = 0; i < d.size(); ++i) err = std::max(err, std::abs(ga.support()[i] / expected.support_at(d.node(i)) - 1.0));
        CAPTURE(sh);
        CHECK(err <= 1.5 * h);
      }
    }
  }

  TEST_CASE("Wulff Laplacian with the unit ball") {
    const DirectionSet d = DirectionSet::uniform(256);
    const ConvexBody ball = ConvexBody::ball(d);
    // p = 2 on the sine mode: -Laplacian = 2 pi^2 f, second order in h.
    double prev = 0.0;
    for (double h : {1.0 / 32, 1.0 / 64}) {
      const GridFunction s = sine(h);
      const GridFunction w = wulff_laplacian(s, ball, 2.0);
      double err = 0.0;
      for (std::size_t k = 0; k < s.values().size(); ++k)
        if (s.mask()[k]) err = std::max(err, std::abs(w.values()[k] - 2 * kPi * kPi * s.values()[k]));
      CHECK(err <= 2 * kPi * kPi * 0.01);
      if (prev > 0) CHECK(err <= prev / 3.5);
      prev = err;
    }
    const GridFunction r = random_bump(kDisk, 1.0 / 32, 8);
    for (double p : {1.5, 2.0, 3.0}) {
      const GridFunction a = wulff_laplacian(r, ball, p);
      const GridFunction b = classical_p_laplacian(r, p);
      CHECK(max_diff(a, b) <= 1e-10 * max_abs(b.values()));
    }
  }

  TEST_CASE("Wulff Laplacian transforms with the body") {
    // Delta_{p,AK} f (Ax) = Delta_{p,K} f_A (x). The mesh does not follow the shear, so the
    // agreement is first order in h; pointwise for p >= 2, weakly for p < 2 where the
    // operator is singular at critical points of f.
    const ConvexBody k = ConvexBody::ellipse(DirectionSet::uniform(256), Mat2{1.5, 0.2, 0.2, 0.8});
    for (double s : {-1.0, 1.0})
      for (double p : {1.5, 2.0, 3.0}) {
        CAPTURE(s);
        CAPTURE(p);
        const ConvexBody ak = k.transformed(Mat2::shear(s));
        auto op = [&](const GridFunction& g) { return wulff_laplacian(g, k, p); };
        auto op_a = [&](const GridFunction& g) { return wulff_laplacian(g, ak, p); };
        const Transport c = transport(s, 1.0 / 32, op, op_a);
        const Transport f = transport(s, 1.0 / 64, op, op_a);
        check_first_order(c.weak, f.weak, 0.5);
        if (p >= 2.0) check_first_order(c.pointwise, f.pointwise, 4.0);
      }
  }

  TEST_CASE("affine Laplacian equals the Wulff Laplacian of G") {
    for (double p : {1.5, 2.0, 3.0}) {
      const DirectionSet d = DirectionSet::uniform(64);
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const GridFunction f = random_bump(kDisk, 1.0 / 32, seed);
        const OperatorContext ctx(f, p, d);
        const GridFunction a = affine_laplacian(ctx);
        const GridFunction w = wulff_laplacian(f, body_G(ctx), p);
        CHECK(max_diff(a, w) <= 1e-8 * max_abs(a.values()));
      }
    }
  }

  TEST_CASE("affine Laplacian homogeneity") {
    const DirectionSet d = DirectionSet::uniform(64);
    const GridFunction f = random_bump(kDisk, 1.0 / 32, 6);
    for (double p : {1.5, 2.0, 3.0})
      for (double lam : {0.3, 2.0, 7.5}) {
        const GridFunction a = affine_laplacian(OperatorContext(f, p, d));
        const GridFunction b = affine_laplacian(OperatorContext(f.scaled(lam), p, d));
        const double s = std::pow(lam, p - 1);
        CHECK(max_diff(a.scaled(s), b) <= 1e-10 * max_abs(b.values()));
        const GridFunction c = classical_p_laplacian(f.scaled(lam), p);
        CHECK(max_diff(classical_p_laplacian(f, p).scaled(s), c) <= 1e-10 * max_abs(c.values()));
      }
  }

  TEST_CASE("affine Laplacian of a radial function is the classical one") {
    const GridFunction f = GridFunction::sample(kDisk, 1.0 / 64, paraboloid);
    for (double p : {1.5, 2.0, 3.0}) {
      const GridFunction a = affine_laplacian(OperatorContext(f, p, DirectionSet::uniform(64)));
      const GridFunction c = classical_p_laplacian(f, p);
      CHECK(max_diff(a, c) <= 0.01 * max_abs(c.values()));
    }
  }

  TEST_CASE("affine Laplacian commutes with integer shears") {
    const DirectionSet d = DirectionSet::uniform(64);
    for (double s : {-1.0, 1.0})
      for (double p : {1.5, 2.0, 3.0}) {
        CAPTURE(s);
        CAPTURE(p);
        auto op = [&](const GridFunction& g) { return affine_laplacian(OperatorContext(g, p, d)); };
        const Transport c = transport(s, 1.0 / 32, op, op);
        const Transport f = transport(s, 1.0 / 64, op, op);
        check_first_order(c.weak, f.weak, 0.5);
        if (p >= 2.0) check_first_order(c.pointwise, f.pointwise, 4.0);
      }
  }

  TEST_CASE("classical p-Laplacian") {
    double prev = 0.0;
    for (double h : {1.0 / 32, 1.0 / 64}) {
      const GridFunction s = sine(h);
      const GridFunction c = classical_p_laplacian(s, 2.0);
      double err = 0.0;
      for (std::size_t k = 0; k < s.values().size(); ++k)
        if (s.mask()[k]) err = std::max(err, std::abs(c.values()[k] - 2 * kPi * kPi * s.values()[k]));
      if (prev > 0) CHECK(err <= prev / 3.5);
      prev = err;
    }
    // Zero away from the support's edge for a function that is constant there.
    const GridFunction plateau = GridFunction::sample(ShapeSpec::rectangle({0, 0}, {2, 2}), 0.1, [](Vec2) { return 1.0; });
    for (double p : {1.5, 2.0, 3.0}) {
      const GridFunction c = classical_p_laplacian(plateau, p);
      for (int j = 0; j < plateau.lattice().ny; ++j)
        for (int i = 0; i < plateau.lattice().nx; ++i)
          if (deep_inside(plateau, i, j, 1)) CHECK(c.at(i, j) == 0.0);
    }
  }

  TEST_CASE("weak form is the derivative of E^p / p") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const DirectionSet d = DirectionSet::uniform(64);
    const GridFunction f = random_bump(kDisk, 1.0 / 32, 4);
    for (double p : {1.5, 2.0, 3.0}) {
      const OperatorContext ctx(f, p, d);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(f.values().size());
        for (double& x : v) x = u(rng);
        const GridFunction psi = f.with_values(v);
        // Small enough for the kink of |t|^p at p < 2, large enough to keep roundoff below 1e-6.
        const double eps = 1e-6;
        std::vector<double> plus = f.values(), minus = f.values();
        for (std::size_t k = 0; k < v.size(); ++k) {
          plus[k] += eps * psi.values()[k];
          minus[k] -= eps * psi.values()[k];
        }
        const double ep = std::pow(affine_energy(f.with_values(plus), p, d).energy, p) / p;
        const double em = std::pow(affine_energy(f.with_values(minus), p, d).energy, p) / p;
        const double fd = (ep - em) / (2 * eps);
        CHECK(std::abs(weak_form_pairing(ctx, psi) - fd) <= 1e-4 * std::abs(fd));
      }
    }
  }

  TEST_CASE("Euler-Lagrange residual and self pairing") {
    SolveOptions o;
    o.p = 2.0;
    o.h = 1.0 / 32;
    const EigenResult r = minimize_rayleigh(kDisk, o);
    REQUIRE(r.converged);
    const DirectionSet d = DirectionSet::uniform(o.directions);
    const OperatorContext ctx(r.minimizer, o.p, d);
    const double res = el_residual(ctx, r.lambda);
    CHECK(res <= 10 * o.tol_rel);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.9, 1.1);
    std::vector<double> noisy = r.minimizer.values();
    for (double& x : noisy) x *= u(rng);
    const GridFunction g = r.minimizer.with_values(noisy);
    const OperatorContext nctx(g, o.p, d);
    CHECK(el_residual(nctx, rayleigh_affine(g, o.p, d)) > 10 * res);

    for (double p : {1.5, 3.0}) {
      const GridFunction f = random_bump(kDisk, 1.0 / 32, 10);
      const OperatorContext c(f, p, d);
      const double lam = rayleigh_affine(f, p, d);
      const SelfPairing sp = el_self_pairing(c, lam);
      CHECK(sp.energy_term == doctest::Approx(sp.energy_p).epsilon(1e-6));
      CHECK(sp.mass_term == doctest::Approx(sp.mass_p).epsilon(1e-6));
    }
  }
}
