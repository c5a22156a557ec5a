#include "affeig/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "affeig/errors.hpp"

namespace affeig::io {

namespace {

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(field, "expected a finite number");
  return v;
}

const Json& member(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw ParseError(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(field + "." + key, "missing");
  return *it;
}

Vec2 point(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError(field, "expected [x, y]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Mat2 matrix(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError(field, "expected a 2x2 matrix [[a, b], [c, d]]");
  const Vec2 r0 = point(j[0], field + "[0]"), r1 = point(j[1], field + "[1]");
  return {r0.x, r0.y, r1.x, r1.y};
}

Json vec(Vec2 v) { return Json::array({v.x, v.y}); }
Json mat(const Mat2& m) { return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})}); }

// Rethrows shape validation failures against the field that produced them.
template <class F>
ShapeSpec checked(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ParseError(field, e.what());
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what, std::string("malformed JSON: ") + e.what());
  }
}

ShapeSpec parse_shape(const Json& j, const std::string& field) {
  const Json& kind = member(j, "kind", field);
  if (!kind.is_string()) throw ParseError(field + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "polygon") {
    const Json& vs = member(j, "vertices", field);
    if (!vs.is_array()) throw ParseError(field + ".vertices", "expected an array of points");
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < vs.size(); ++i) v.push_back(point(vs[i], field + ".vertices[" + std::to_string(i) + "]"));
    return checked(field + ".vertices", [&] { return ShapeSpec::polygon(std::move(v)); });
  }
  if (k == "ellipse") {
    const Mat2 m = matrix(member(j, "matrix", field), field + ".matrix");
    const Vec2 c = j.contains("center") ? point(j["center"], field + ".center") : Vec2{};
    return checked(field + ".matrix", [&] { return ShapeSpec::ellipse(m, c); });
  }
  if (k == "transformed") {
    const ShapeSpec base = parse_shape(member(j, "base", field), field + ".base");
    const Mat2 m = j.contains("matrix") ? matrix(j["matrix"], field + ".matrix") : Mat2::identity();
    const Vec2 t = j.contains("translate") ? point(j["translate"], field + ".translate") : Vec2{};
    return checked(field + ".matrix", [&] { return base.transformed(m, t); });
  }
  throw ParseError(field + ".kind", "expected polygon, ellipse or transformed, got '" + k + "'");
}

ShapeSpec load_shape(const std::string& path) {
  if (path.rfind("builtin:", 0) == 0) return builtin_shape(path.substr(8));
  return parse_shape(parse_json(read_file(path), path), path);
}

ShapeSpec builtin_shape(const std::string& name) {
  if (name == "disk") return ShapeSpec::disk(1.0);
  if (name == "square") return ShapeSpec::rectangle({0, 0}, {1, 1});
  if (name == "ellipse") return ShapeSpec::ellipse(Mat2::diag(1.0, 0.5));
  if (name == "triangle") return ShapeSpec::polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}});
  if (name == "hexagon") return ShapeSpec::regular_polygon(6, 1.0);
  if (name == "rectangle") return ShapeSpec::rectangle({0, 0}, {2, 1});
  throw InvalidArgument("unknown builtin shape '" + name + "' (disk, square, ellipse, triangle, hexagon, rectangle)");
}

Json shape_json(const ShapeSpec& s) {
  Json j;
  if (s.is_ellipse()) {
    j["kind"] = "ellipse";
    j["matrix"] = mat(s.matrix());
    j["center"] = vec(s.center());
  } else {
    j["kind"] = "polygon";
    Json v = Json::array();
    for (const auto& x : s.vertices()) v.push_back(vec(x));
    j["vertices"] = std::move(v);
  }
  return j;
}

GridFunction parse_function(const Json& j, const ShapeSpec& shape, const std::string& field) {
  const Json& grid = member(j, "grid", field);
  const double h = number(member(grid, "h", field + ".grid"), field + ".grid.h");
  if (!(h > 0.0)) throw ParseError(field + ".grid.h", "must be positive");
  const Vec2 origin = point(member(grid, "origin", field + ".grid"), field + ".grid.origin");
  const double oi = origin.x / h, oj = origin.y / h;
  if (std::abs(oi - std::round(oi)) > 1e-9 || std::abs(oj - std::round(oj)) > 1e-9)
    throw ParseError(field + ".grid.origin", "must be an integer multiple of h");
  const Json& rows = member(j, "values", field);
  if (!rows.is_array()) throw ParseError(field + ".values", "expected an array of rows");
  GridFunction base = GridFunction::zeros(shape, h);
  const Lattice& l = base.lattice();
  const long di = std::lround(oi) - std::lround(l.origin.x / h);
  const long dj = std::lround(oj) - std::lround(l.origin.y / h);
  std::vector<double> vals(l.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rf = field + ".values[" + std::to_string(r) + "]";
    if (!rows[r].is_array()) throw ParseError(rf, "expected a row of numbers");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const double v = number(rows[r][c], rf + "[" + std::to_string(c) + "]");
      const long i = static_cast<long>(c) + di, jj = static_cast<long>(r) + dj;
      if (i < 0 || jj < 0 || i >= l.nx || jj >= l.ny) continue;
      vals[l.index(static_cast<int>(i), static_cast<int>(jj))] = v;
    }
  }
  return base.with_values(std::move(vals));
}

GridFunction load_function(const std::string& path, const ShapeSpec& shape) {
  return parse_function(parse_json(read_file(path), path), shape, path);
}

Json function_json(const GridFunction& f) {
  const Lattice& l = f.lattice();
  Json j;
  j["grid"] = {{"h", l.h}, {"origin", vec(l.origin)}, {"nx", l.nx}, {"ny", l.ny}};
  Json rows = Json::array();
  for (int jj = 0; jj < l.ny; ++jj) {
    Json row = Json::array();
    for (int i = 0; i < l.nx; ++i) row.push_back(f.at(i, jj));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j;
}

Json energy_json(const EnergyBreakdown& e, const DirectionSet& dirs) {
  Json j;
  j["p"] = e.p;
  j["energy"] = e.energy;
  j["grad_norm"] = e.grad_norm;
  j["lp_norm"] = e.lp_norm;
  j["ratio_energy_to_grad_norm"] = e.grad_norm > 0 ? e.energy / e.grad_norm : 0.0;
  Json angles = Json::array(), norms = Json::array();
  for (int i = 0; i < dirs.size(); ++i) {
    angles.push_back(dirs.angle(i));
    norms.push_back(e.directional_norms[i]);
  }
  j["directions"] = dirs.size();
  j["angles"] = std::move(angles);
  j["directional_norms"] = std::move(norms);
  return j;
}

Json result_json(const EigenResult& r, bool include_minimizer) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["p"] = r.p;
  j["directions"] = r.directions;
  j["lambda"] = r.lambda;
  j["el_residual"] = r.el_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["certified"] = r.converged;
  j["starts"] = r.starts;
  j["best_start"] = r.best_start;
  j["history"] = r.history;
  if (include_minimizer) j["minimizer"] = function_json(r.minimizer);
  return j;
}

Json certificate_json(const Certificate& c) {
  return {{"lambda", c.lambda},
          {"el_residual", c.el_residual},
          {"energy_pairing", c.energy_pairing},
          {"energy_p", c.energy_p},
          {"mass_pairing", c.mass_pairing},
          {"mass_p", c.mass_p},
          {"lambda_from_pairing", c.lambda_from_pairing},
          {"min_value", c.min_value},
          {"lp_norm", c.lp_norm},
          {"nonnegative", c.nonnegative},
          {"normalized", c.normalized},
          {"residual_ok", c.residual_ok},
          {"pairing_ok", c.pairing_ok}};
}

Json candidate_json(const CheegerCandidate& c) {
  return {{"family", c.family},
          {"params", c.params},
          {"center", vec(c.center)},
          {"scale", c.scale},
          {"area", c.set.area()},
          {"perimeter", c.perimeter},
          {"classical_ratio", c.classical_ratio},
          {"affine_ratio", c.affine_ratio},
          {"set", shape_json(c.set)}};
}

Json position_json(const Position& p) {
  return {{"matrix", mat(p.matrix)},
          {"translation", vec(p.translation)},
          {"volume", p.volume},
          {"grid",
           {{"angles", p.angle_steps},
            {"stretches", p.stretch_steps},
            {"shears", p.shear_steps},
            {"stretch_range", {p.stretch_min, p.stretch_max}},
            {"shear_range", {p.shear_min, p.shear_max}}}}};
}

Json cheeger_json(const CheegerReport& r) {
  return {{"evaluated", r.evaluated},
          {"classical_best", candidate_json(r.classical_best)},
          {"affine_best", candidate_json(r.affine_best)},
          {"maximal_position", position_json(r.position)},
          {"position_ratio", r.position_ratio},
          {"position_ok", r.position_ok}};
}

Json report_json(const VerificationReport& r) {
  return {{"suite", r.suite},   {"check", r.check},         {"relation", r.relation}, {"shape", r.shape},
          {"p", r.p},           {"h", r.h},                 {"directions", r.directions}, {"seed", r.seed},
          {"lhs", r.lhs},       {"rhs", r.rhs},             {"margin", r.margin},     {"tolerance", r.tolerance},
          {"strict", r.strict}, {"pass", r.pass},           {"note", r.note}};
}

Json reports_json(const std::vector<VerificationReport>& reports) {
  Json arr = Json::array();
  int failed = 0;
  for (const auto& r : reports) {
    arr.push_back(report_json(r));
    failed += r.pass ? 0 : 1;
  }
  return {{"total", reports.size()}, {"failed", failed}, {"all_pass", failed == 0}, {"reports", std::move(arr)}};
}

std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream s;
  s.precision(17);
  s << "suite,shape,p,h,M,lhs,rhs,margin,pass\n";
  for (const auto& r : reports) {
    std::string shape = r.shape;
    if (shape.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : shape) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      shape = q + "\"";
    }
    s << r.suite << ',' << shape << ',' << r.p << ',' << r.h << ',' << r.directions << ',' << r.lhs << ',' << r.rhs
      << ',' << r.margin << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return s.str();
}

}  // namespace affeig::io
