#include <cmath>
#include <fstream>
#include <numbers>

#include "affeig/constants.hpp"
#include "affeig/directions.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace affeig;
using namespace affeig::constants;
using Json = nlohmann::json;

namespace {

const Json& golden() {
  static const Json j = [] {
    std::ifstream f(AFFEIG_FIXTURES "/golden_constants.json");
    REQUIRE(f.good());
    return Json::parse(f);
  }();
  return j;
}

void close_rel(double got, double want, double tol) {
  INFO("got " << got << " want " << want);
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}

}  // namespace

TEST_SUITE("constants") {
  TEST_CASE("gamma matches the high-precision table") {
    for (const auto& [x, v] : golden()["gamma"].items()) close_rel(constants::gamma(std::stod(x)), v.get<double>(), 1e-12);
  }

  TEST_CASE("unit ball volumes") {
    for (const auto& [k, v] : golden()["omega"].items()) close_rel(unit_ball_volume(std::stod(k)), v.get<double>(), 1e-12);
    CHECK(unit_ball_volume(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    for (int k = 2; k <= 20; ++k)
      close_rel(unit_ball_volume(k), unit_ball_volume(k - 2) * 2.0 * std::numbers::pi / k, 1e-12);
  }

  TEST_CASE("golden entries for every (n, p)") {
    for (const Json& e : golden()["entries"]) {
      const int n = e["n"];
      const double p = e["p"];
      CAPTURE(n);
      CAPTURE(p);
      close_rel(c_np(n, p), e["c_np"], 1e-12);
      close_rel(talenti_constant(p), e["talenti_C"], 1e-12);
      close_rel(sphere_moment(n, p), e["sphere_moment_a"], 1e-12);
      close_rel(reverse_zhang_constants(n, p, 1.0).absolute, e["reverse_zhang_absolute"], 1e-12);
      close_rel(huang_li_constant(n, p), e["huang_li_alpha"], 1e-12);
      const CentroidNormalizers cn = centroid_normalizers(n, p);
      close_rel(cn.b, e["centroid_b"], 1e-12);
      close_rel(cn.r, e["centroid_r"], 1e-12);
      CHECK(cn.b > 0);
      CHECK(cn.r > 0);
    }
  }

  TEST_CASE("planar closed forms") {
    CHECK(c_np(2, 2) == doctest::Approx(2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(sphere_moment(2, 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(huang_li_constant(2, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(talenti_constant(1.0) == 2.0);
    CHECK(centroid_normalizers(2, 2).b == doctest::Approx(0.25).epsilon(1e-14));
  }

  TEST_CASE("sphere moment against quadrature on 4096 directions") {
    const DirectionSet dirs = DirectionSet::uniform(4096);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      double s = 0.0;
      for (int i = 0; i < dirs.size(); ++i) s += dirs.weight(i) * std::pow(std::abs(dirs.node(i).x), p);
      s /= 2.0 * std::numbers::pi;
      CAPTURE(p);
      CHECK(std::abs(sphere_moment(2, p) - s) <= 1e-6);
    }
  }

  TEST_CASE("reverse Zhang domain constant scales with width") {
    const ReverseZhang a = reverse_zhang_constants(2, 2.0, 1.0);
    const ReverseZhang b = reverse_zhang_constants(2, 2.0, 2.0);
    CHECK(a.domain_dependent > b.domain_dependent);
    CHECK(a.absolute == b.absolute);
  }

  TEST_CASE("Bessel zeros") {
    for (const auto& [key, v] : golden()["bessel_zero"].items()) {
      const auto cut = key.find('_');
      const double order = std::stod(key.substr(0, cut));
      const int index = std::stoi(key.substr(cut + 1));
      CHECK(std::abs(bessel_zero(order, index) - v.get<double>()) <= 1e-8);
    }
    const double j01 = bessel_zero(0, 1);
    CHECK(j01 * j01 == doctest::Approx(5.7831860).epsilon(1e-7));
    CHECK(bessel_zero(0, 2) > j01);
    CHECK(std::abs(bessel_j(0, j01)) < 1e-10);
  }

  TEST_CASE("constant table is bit-stable and validates input") {
    const ConstantTable a = constant_table(2, 1.5, 2.0);
    const ConstantTable b = constant_table(2, 1.5, 2.0);
    CHECK(a == b);
    CHECK(a.count("reverse_zhang_domain") == 1);
    CHECK(constant_table(2, 1.5).count("reverse_zhang_domain") == 0);
    CHECK_THROWS(c_np(2, 0.5));
    CHECK_THROWS(c_np(1, 2.0));
  }
}
