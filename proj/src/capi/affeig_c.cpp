#include "affeig/affeig.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>

#include "affeig/body.hpp"
#include "affeig/cheeger.hpp"
#include "affeig/constants.hpp"
#include "affeig/eigensolver.hpp"
#include "affeig/energy.hpp"
#include "affeig/errors.hpp"
#include "affeig/functions.hpp"
#include "affeig/io.hpp"
#include "affeig/operators.hpp"
#include "affeig/parallel.hpp"
#include "affeig/shape.hpp"
#include "affeig/verify.hpp"

struct affeig_shape {
  affeig::ShapeSpec shape;
};

struct affeig_function {
  affeig::GridFunction f;
};

struct affeig_result {
  affeig::EigenResult result;
};

namespace {

using affeig::io::Json;

thread_local std::string t_error;

template <class F>
affeig_status guarded(F&& body) {
  try {
    body();
    t_error.clear();
    return AFFEIG_OK;
  } catch (const affeig::ParseError& e) {
    t_error = e.what();
    return AFFEIG_ERR_PARSE;
  } catch (const affeig::IoError& e) {
    t_error = e.what();
    return AFFEIG_ERR_IO;
  } catch (const affeig::DegenerateDirection& e) {
    t_error = e.what();
    return AFFEIG_ERR_DEGENERATE;
  } catch (const affeig::Infeasible& e) {
    t_error = e.what();
    return AFFEIG_ERR_INFEASIBLE;
  } catch (const affeig::InvalidArgument& e) {
    t_error = e.what();
    return AFFEIG_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    t_error = e.what();
    return AFFEIG_ERR_INTERNAL;
  } catch (...) {
    t_error = "unknown error";
    return AFFEIG_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) {
  if (!out) throw affeig::InvalidArgument("output pointer is null");
  *out = dup(j.dump(2));
}

template <class T>
const T& need(const T* p, const char* what) {
  if (!p) throw affeig::InvalidArgument(std::string(what) + " is null");
  return *p;
}

std::string str(const char* s, const char* what) {
  if (!s) throw affeig::InvalidArgument(std::string(what) + " is null");
  return s;
}

Json samples(const std::vector<double>& v) { return Json(v); }

double pairing(const affeig::GridFunction& f, const affeig::GridFunction& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.values().size(); ++k) s += f.values()[k] * g.values()[k];
  return s * f.h() * f.h();
}

}  // namespace

extern "C" {

const char* affeig_last_error(void) { return t_error.c_str(); }
const char* affeig_version(void) { return "0.1.0"; }
void affeig_string_free(char* s) { std::free(s); }

affeig_status affeig_set_threads(int n) {
  return guarded([&] {
    if (n < 1) throw affeig::InvalidArgument("thread count must be >= 1");
    affeig::set_thread_count(n);
  });
}

int affeig_get_threads(void) { return affeig::thread_count(); }

affeig_status affeig_shape_from_json(const char* json, affeig_shape** out) {
  return guarded([&] {
    need(out, "out");
    const Json j = affeig::io::parse_json(str(json, "json"), "shape");
    *out = new affeig_shape{affeig::io::parse_shape(j)};
  });
}

affeig_status affeig_shape_load(const char* path, affeig_shape** out) {
  return guarded([&] {
    need(out, "out");
    *out = new affeig_shape{affeig::io::load_shape(str(path, "path"))};
  });
}

affeig_status affeig_shape_to_json(const affeig_shape* shape, char** out) {
  return guarded([&] { emit(affeig::io::shape_json(need(shape, "shape").shape), out); });
}

affeig_status affeig_shape_area(const affeig_shape* shape, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = need(shape, "shape").shape.area();
  });
}

affeig_status affeig_shape_transform(const affeig_shape* shape, const double matrix[4], const double translate[2],
                                     affeig_shape** out) {
  return guarded([&] {
    need(matrix, "matrix");
    need(out, "out");
    const affeig::Mat2 a{matrix[0], matrix[1], matrix[2], matrix[3]};
    const affeig::Vec2 t = translate ? affeig::Vec2{translate[0], translate[1]} : affeig::Vec2{};
    *out = new affeig_shape{need(shape, "shape").shape.transformed(a, t)};
  });
}

void affeig_shape_free(affeig_shape* shape) { delete shape; }

affeig_status affeig_function_builtin(const affeig_shape* shape, const char* name, double h, affeig_function** out) {
  return guarded([&] {
    need(out, "out");
    *out = new affeig_function{affeig::builtin_function(str(name, "name"), need(shape, "shape").shape, h)};
  });
}

affeig_status affeig_function_load(const affeig_shape* shape, const char* path, affeig_function** out) {
  return guarded([&] {
    need(out, "out");
    *out = new affeig_function{affeig::io::load_function(str(path, "path"), need(shape, "shape").shape)};
  });
}

affeig_status affeig_function_to_json(const affeig_function* f, char** out) {
  return guarded([&] { emit(affeig::io::function_json(need(f, "function").f), out); });
}

void affeig_function_free(affeig_function* f) { delete f; }

affeig_status affeig_constants_json(int n, double p, double max_width, char** out) {
  return guarded([&] {
    const auto table =
        affeig::constants::constant_table(n, p, max_width > 0 ? std::optional<double>(max_width) : std::nullopt);
    Json j;
    j["n"] = n;
    j["p"] = p;
    if (max_width > 0) j["max_width"] = max_width;
    for (const auto& [k, v] : table) j[k] = v;
    emit(j, out);
  });
}

affeig_status affeig_body_json(const affeig_shape* shape, const char* op, double p, int directions, char** out) {
  return guarded([&] {
    const affeig::ShapeSpec& s = need(shape, "shape").shape;
    const std::string o = str(op, "op");
    const affeig::DirectionSet dirs = affeig::DirectionSet::uniform(directions);
    Json j;
    j["op"] = o;
    j["directions"] = directions;
    if (o == "projection") {
      const affeig::ConvexBody pb = affeig::projection_body(s, dirs);
      j["projection_support"] = samples(pb.support());
      j["polar_projection_volume"] = affeig::polar_projection_volume(s);
      emit(j, out);
      return;
    }
    const affeig::ConvexBody k = affeig::ConvexBody::from_shape(dirs, s);
    if (o == "volume") {
      j["volume"] = affeig::model_volume(k);
      j["quadrature_volume"] = affeig::body_volume(k);
    } else if (o == "polar") {
      const affeig::ConvexBody pk = k.polar();
      j["polar_volume"] = affeig::model_volume(pk);
      j["support"] = samples(pk.support());
      j["radial"] = samples(pk.radial());
    } else if (o == "santalo") {
      j["volume"] = affeig::model_volume(k);
      j["polar_volume"] = affeig::model_volume(k.polar());
      j["santalo_product"] = affeig::santalo_product(k);
      j["bound"] = std::numbers::pi * std::numbers::pi;
    } else if (o == "centroid") {
      if (!(p >= 1.0)) throw affeig::InvalidArgument("centroid body needs p >= 1");
      j["p"] = p;
      const double margin = affeig::busemann_petty_margin(k, p);
      j["volume"] = affeig::model_volume(k);
      j["centroid_volume"] = (1.0 + margin) * affeig::model_volume(k);
      j["busemann_petty_margin"] = margin;
      j["support"] = samples(affeig::centroid_body(k, p).support());
    } else {
      throw affeig::InvalidArgument("op must be polar, volume, santalo, centroid or projection, got '" + o + "'");
    }
    emit(j, out);
  });
}

affeig_status affeig_energy_json(const affeig_function* f, double p, int directions, char** out) {
  return guarded([&] {
    const affeig::DirectionSet dirs = affeig::DirectionSet::uniform(directions);
    const affeig::GridFunction& g = need(f, "function").f;
    Json j = affeig::io::energy_json(affeig::affine_energy(g, p, dirs), dirs);
    j["h"] = g.h();
    emit(j, out);
  });
}

affeig_status affeig_apply_json(const affeig_function* f, double p, const char* op, const affeig_shape* body,
                                int directions, char** out) {
  return guarded([&] {
    const affeig::GridFunction& g = need(f, "function").f;
    const std::string o = str(op, "operator");
    if (!(p > 1.0)) throw affeig::InvalidArgument("operators need p > 1");
    affeig::GridFunction field;
    Json j;
    j["operator"] = o;
    j["p"] = p;
    j["h"] = g.h();
    if (o == "affine") {
      const affeig::OperatorContext ctx(g, p, affeig::DirectionSet::uniform(directions));
      field = affeig::affine_laplacian(ctx);
      j["directions"] = directions;
      j["energy"] = ctx.energy();
    } else if (o == "classical") {
      field = affeig::classical_p_laplacian(g, p);
    } else if (o == "wulff") {
      if (!body) throw affeig::InvalidArgument("wulff operator needs a body shape");
      const affeig::ConvexBody k = affeig::ConvexBody::from_shape(affeig::DirectionSet::uniform(directions), body->shape);
      field = affeig::wulff_laplacian(g, k, p);
      j["directions"] = directions;
    } else {
      throw affeig::InvalidArgument("operator must be affine, classical or wulff, got '" + o + "'");
    }
    j["pairing_with_f"] = pairing(field, g);
    j["field"] = affeig::io::function_json(field);
    emit(j, out);
  });
}

void affeig_solve_options_default(affeig_solve_options* opts) {
  if (!opts) return;
  const affeig::SolveOptions d;
  opts->p = d.p;
  opts->h = d.h;
  opts->directions = d.directions;
  opts->max_iterations = d.max_iterations;
  opts->tol_rel = d.tol_rel;
  opts->mode = "affine";
  opts->init = "classical-eigen";
  opts->seed = d.seed;
  opts->warm_start = 0;
  opts->multistart = 1;
  opts->init_function = nullptr;
}

affeig_status affeig_eigensolve(const affeig_shape* shape, const affeig_solve_options* opts, affeig_result** out) {
  return guarded([&] {
    const affeig_solve_options& o = need(opts, "options");
    need(out, "out");
    affeig::SolveOptions s;
    s.p = o.p;
    s.h = o.h;
    s.directions = o.directions;
    s.max_iterations = o.max_iterations;
    s.tol_rel = o.tol_rel;
    s.mode = affeig::parse_mode(o.mode ? o.mode : "affine");
    s.init = affeig::parse_init(o.init ? o.init : "classical-eigen");
    s.seed = o.seed;
    s.warm_start = o.warm_start != 0;
    s.multistart = o.multistart;
    if (o.init_function) s.init_function = o.init_function->f;
    *out = new affeig_result{affeig::minimize_rayleigh(need(shape, "shape").shape, s)};
  });
}

double affeig_result_lambda(const affeig_result* r) { return r ? r->result.lambda : std::nan(""); }
int affeig_result_converged(const affeig_result* r) { return r && r->result.converged ? 1 : 0; }

affeig_status affeig_result_json(const affeig_result* r, int include_minimizer, int certify, char** out) {
  return guarded([&] {
    const affeig::EigenResult& res = need(r, "result").result;
    Json j = affeig::io::result_json(res, include_minimizer != 0);
    if (certify) j["certificate"] = affeig::io::certificate_json(affeig::certify(res, res.directions));
    emit(j, out);
  });
}

void affeig_result_free(affeig_result* r) { delete r; }

affeig_status affeig_cheeger_json(const affeig_shape* shape, const char* family, int budget, char** out) {
  return guarded([&] {
    affeig::CheegerOptions o;
    o.family = affeig::parse_family(str(family, "family"));
    o.budget = budget;
    const affeig::ShapeSpec& s = need(shape, "shape").shape;
    Json j = affeig::io::cheeger_json(affeig::cheeger_search(s, o));
    j["domain_classical_ratio"] = affeig::classical_cheeger_ratio(s);
    j["domain_affine_ratio"] = affeig::affine_cheeger_ratio(s);
    emit(j, out);
  });
}

void affeig_verify_options_default(affeig_verify_options* opts) {
  if (!opts) return;
  const affeig::VerifyOptions d;
  opts->p = d.p;
  opts->h = d.h;
  opts->directions = d.directions;
  opts->seed = d.seed;
  opts->tol_rel = d.tol_rel;
}

affeig_status affeig_verify(const char* suite, const affeig_verify_options* opts, char** json, char** csv,
                            int* all_pass) {
  return guarded([&] {
    const affeig_verify_options& o = need(opts, "options");
    affeig::VerifyOptions v;
    v.p = o.p;
    v.h = o.h;
    v.directions = o.directions;
    v.seed = o.seed;
    v.tol_rel = o.tol_rel;
    affeig::Verifier verifier(v);
    const auto reports = verifier.run(str(suite, "suite"));
    need(json, "json");
    std::string text = affeig::io::reports_json(reports).dump(2);
    char* csv_text = csv ? dup(affeig::io::reports_csv(reports)) : nullptr;
    *json = dup(text);
    if (csv) *csv = csv_text;
    if (all_pass) *all_pass = affeig::all_pass(reports) ? 1 : 0;
  });
}

}  // extern "C"
