#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "affeig/errors.hpp"
#include "affeig/functions.hpp"
#include "affeig/io.hpp"
#include "doctest.h"

using namespace affeig;
using io::Json;

namespace {

// Field named by the ParseError thrown for a shape document, or "" when parsing succeeds.
std::string failing_field(const std::string& text) {
  try {
    io::parse_shape(io::parse_json(text, "doc"));
  } catch (const ParseError& e) {
    return e.field();
  }
  return "";
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("affeig_io_" + name)).string();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("polygon, ellipse and transformed shapes parse") {
    const ShapeSpec tri = io::parse_shape(Json::parse(R"({"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]})"));
    CHECK(tri.is_polygon());
    CHECK(tri.area() == doctest::Approx(0.5).epsilon(1e-14));

    const ShapeSpec ell =
        io::parse_shape(Json::parse(R"({"kind":"ellipse","matrix":[[2,0],[0,0.5]],"center":[1,-1]})"));
    CHECK(ell.is_ellipse());
    CHECK(ell.area() == doctest::Approx(std::acos(-1.0)).epsilon(1e-14));

    const ShapeSpec sq = io::parse_shape(Json::parse(
        R"({"kind":"transformed","base":{"kind":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]},)"
        R"("matrix":[[1,1],[0,1]],"translate":[2,0]})"));
    CHECK(sq.area() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sq.contains({2.9, 0.5}));
  }

  TEST_CASE("malformed shapes name the offending field") {
    CHECK(failing_field(R"({"kind":"polygon","vertices":[[0,0],[1,"x"],[0,1]]})") == "shape.vertices[1][1]");
    CHECK(failing_field(R"({"kind":"polygon","vertices":[[0,0],[1,0,2],[0,1]]})") == "shape.vertices[1]");
    CHECK(failing_field(R"({"kind":"polygon"})") == "shape.vertices");
    CHECK(failing_field(R"({"vertices":[]})") == "shape.kind");
    CHECK(failing_field(R"({"kind":"blob"})") == "shape.kind");
    CHECK(failing_field(R"({"kind":"ellipse","matrix":[[1,0],[0]],"center":[0,0]})") == "shape.matrix[1]");
    CHECK(failing_field(R"({"kind":"polygon","vertices":[[0,0],[1,1],[2,2]]})") == "shape.vertices");
    CHECK(failing_field(R"({"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]})").empty());
    CHECK(failing_field(R"({"kind":"transformed","base":{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]},)"
                        R"("matrix":[[1,0],[0,"a"]],"translate":[0,0]})")
              .rfind("shape.matrix", 0) == 0);
    CHECK_THROWS_AS(io::parse_json("{not json", "doc"), ParseError);
  }

  TEST_CASE("missing files report the path") {
    const std::string path = temp_path("does_not_exist.json");
    std::remove(path.c_str());
    try {
      io::load_shape(path);
      FAIL("expected an IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
  }

  TEST_CASE("builtin shapes") {
    for (const char* name : {"disk", "square", "ellipse", "triangle", "hexagon", "rectangle"}) {
      CAPTURE(name);
      const ShapeSpec s = io::load_shape(std::string("builtin:") + name);
      CHECK(s.area() > 0.0);
      CHECK(s.is_convex());
    }
    CHECK(io::builtin_shape("square").area() == doctest::Approx(1.0));
    CHECK(io::builtin_shape("rectangle").area() == doctest::Approx(2.0));
    CHECK_THROWS_AS(io::builtin_shape("blob"), InvalidArgument);
  }

  TEST_CASE("shape json round trips") {
    for (const char* name : {"disk", "triangle", "hexagon"}) {
      const ShapeSpec s = io::builtin_shape(name);
      const ShapeSpec back = io::parse_shape(io::shape_json(s));
      CHECK(back.area() == doctest::Approx(s.area()).epsilon(1e-14));
      CHECK(io::shape_json(back).dump() == io::shape_json(s).dump());
    }
  }

  TEST_CASE("grid functions round trip through files") {
    const ShapeSpec disk = io::builtin_shape("disk");
    const GridFunction f = builtin_function("random:5", disk, 1.0 / 16.0);
    const std::string path = temp_path("function.json");
    io::write_file(path, io::function_json(f).dump());
    const GridFunction g = io::load_function(path, disk);
    std::remove(path.c_str());
    CHECK(g.lattice() == f.lattice());
    CHECK(g.values() == f.values());
  }

  TEST_CASE("functions on a partial window are placed by origin") {
    const ShapeSpec sq = io::builtin_shape("square");
    const GridFunction f = io::parse_function(
        Json::parse(R"({"grid":{"h":0.25,"origin":[0.25,0.5]},"values":[[1,2],[3,4]]})"), sq);
    const Lattice& l = f.lattice();
    auto value_at = [&](double x, double y) {
      const int i = static_cast<int>(std::lround((x - l.origin.x) / l.h));
      const int j = static_cast<int>(std::lround((y - l.origin.y) / l.h));
      return f.at(i, j);
    };
    CHECK(value_at(0.25, 0.5) == 1.0);
    CHECK(value_at(0.5, 0.5) == 2.0);
    CHECK(value_at(0.25, 0.75) == 3.0);
    CHECK(value_at(0.5, 0.75) == 4.0);
    CHECK(value_at(0.75, 0.25) == 0.0);
  }

  TEST_CASE("malformed functions name the offending field") {
    const ShapeSpec sq = io::builtin_shape("square");
    auto field_of = [&](const std::string& text) -> std::string {
      try {
        io::parse_function(Json::parse(text), sq);
      } catch (const ParseError& e) {
        return e.field();
      }
      return "";
    };
    CHECK(field_of(R"({"grid":{"h":0,"origin":[0,0]},"values":[]})") == "function.grid.h");
    CHECK(field_of(R"({"grid":{"h":0.25,"origin":[0.1,0]},"values":[]})") == "function.grid.origin");
    CHECK(field_of(R"({"grid":{"h":0.25,"origin":[0,0]},"values":[[0,1],[0,"q"]]})") == "function.values[1][1]");
    CHECK(field_of(R"({"grid":{"h":0.25,"origin":[0,0]},"values":[3]})") == "function.values[0]");
    CHECK(field_of(R"({"values":[]})") == "function.grid");
  }

  TEST_CASE("report writers") {
    VerificationReport r;
    r.suite = "geometry";
    r.shape = "poly, \"odd\"";
    r.p = 2.0;
    r.h = 0.125;
    r.directions = 64;
    r.lhs = 1.0;
    r.rhs = 2.0;
    r.margin = 0.5;
    r.pass = true;
    const std::string csv = io::reports_csv({r});
    CHECK(csv.rfind("suite,shape,p,h,M,lhs,rhs,margin,pass\n", 0) == 0);
    CHECK(csv.find("\"poly, \"\"odd\"\"\"") != std::string::npos);
    const Json j = io::reports_json({r, r});
    CHECK(j["total"] == 2);
    CHECK(j["failed"] == 0);
    CHECK(j["all_pass"] == true);
    CHECK(j["reports"][0]["h"] == 0.125);
  }
}
