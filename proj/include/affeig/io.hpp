#pragma once

#include <string>
#include <vector>

#include "affeig/body.hpp"
#include "affeig/cheeger.hpp"
#include "affeig/eigensolver.hpp"
#include "affeig/energy.hpp"
#include "affeig/grid.hpp"
#include "affeig/shape.hpp"
#include "affeig/verify.hpp"
#include "json.hpp"

namespace affeig::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& what);

// {"kind":"polygon","vertices":[[x,y],...]}
// {"kind":"ellipse","matrix":[[a,b],[b,c]],"center":[x,y]}
// {"kind":"transformed","base":{...},"matrix":[[a,b],[c,d]],"translate":[x,y]}
ShapeSpec parse_shape(const Json& j, const std::string& field = "shape");
ShapeSpec load_shape(const std::string& path);
// disk, square, ellipse, triangle, hexagon, rectangle.
ShapeSpec builtin_shape(const std::string& name);
Json shape_json(const ShapeSpec& s);

// {"grid":{"h":h,"origin":[x,y]},"values":[[...], ...]} with values[j][i] at origin + h (i, j).
// Nodes must be lattice-aligned; values outside the shape are dropped.
GridFunction parse_function(const Json& j, const ShapeSpec& shape, const std::string& field = "function");
GridFunction load_function(const std::string& path, const ShapeSpec& shape);
Json function_json(const GridFunction& f);

Json energy_json(const EnergyBreakdown& e, const DirectionSet& dirs);
Json result_json(const EigenResult& r, bool include_minimizer);
Json certificate_json(const Certificate& c);
Json candidate_json(const CheegerCandidate& c);
Json cheeger_json(const CheegerReport& r);
Json position_json(const Position& p);
Json report_json(const VerificationReport& r);
Json reports_json(const std::vector<VerificationReport>& reports);
// Columns: suite, shape, p, h, M, lhs, rhs, margin, pass.
std::string reports_csv(const std::vector<VerificationReport>& reports);

}  // namespace affeig::io
