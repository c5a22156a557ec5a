// affeig command-line tool. All numerics go through the C API in libaffeig.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "affeig/affeig.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kFailed = 1, kInput = 2, kInternal = 3 };

struct ApiError : std::runtime_error {
  affeig_status status;
  ApiError(affeig_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(affeig_status s) {
  if (s != AFFEIG_OK) throw ApiError(s, affeig_last_error());
}

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json take(char* text) {
  std::unique_ptr<char, void (*)(char*)> guard(text, affeig_string_free);
  return Json::parse(text);
}

std::string take_string(char* text) {
  std::unique_ptr<char, void (*)(char*)> guard(text, affeig_string_free);
  return text ? std::string(text) : std::string();
}

struct ShapeHandle {
  affeig_shape* ptr = nullptr;
  ShapeHandle() = default;
  ShapeHandle(const ShapeHandle&) = delete;
  ShapeHandle& operator=(const ShapeHandle&) = delete;
  ~ShapeHandle() { affeig_shape_free(ptr); }
};

struct FunctionHandle {
  affeig_function* ptr = nullptr;
  FunctionHandle() = default;
  FunctionHandle(const FunctionHandle&) = delete;
  FunctionHandle& operator=(const FunctionHandle&) = delete;
  ~FunctionHandle() { affeig_function_free(ptr); }
};

void load_shape(const std::string& path, ShapeHandle& out) { check(affeig_shape_load(path.c_str(), &out.ptr)); }

// builtin:NAME or file:PATH (a bare path is read as a file).
void load_function(const std::string& spec, const ShapeHandle& shape, double h, FunctionHandle& out) {
  if (spec.rfind("builtin:", 0) == 0) {
    check(affeig_function_builtin(shape.ptr, spec.substr(8).c_str(), h, &out.ptr));
  } else {
    const std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
    check(affeig_function_load(shape.ptr, path.c_str(), &out.ptr));
  }
}

// Flag values shared by every subcommand; each one only reads the fields it registered.
struct RunConfig {
  std::string subcommand;
  std::string shape;
  std::string function;
  std::string body;
  std::string op;
  std::string op_kind;
  std::string mode = "affine";
  std::string init = "classical-eigen";
  std::string family = "all";
  std::string suite = "all";
  int n = 2;
  double p = 2.0;
  double max_width = 0.0;
  double h = 1.0 / 64.0;
  int directions = 64;
  int max_iterations = 2000;
  double tol_rel = 1e-6;
  unsigned long long seed = 0;
  bool warm_start = false;
  int multistart = 1;
  int budget = 2048;
  bool minimizer = false;
  bool certify = false;
  std::string out;
  std::string csv;
  std::string config;
  int threads = 0;
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InputError(std::string(name) + " must be positive");
}

void require_directions(int m) {
  if (m <= 0 || m % 4 != 0) throw InputError("directions must be a positive multiple of 4, got " + std::to_string(m));
}

Json config_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  const std::string& s = c.subcommand;
  if (s == "constants") {
    j["n"] = c.n;
    j["p"] = c.p;
    if (c.max_width > 0) j["max_width"] = c.max_width;
  } else if (s == "body") {
    j["shape"] = c.shape;
    j["op"] = c.op;
    j["p"] = c.p;
    j["directions"] = c.directions;
  } else if (s == "energy") {
    j["shape"] = c.shape;
    j["function"] = c.function;
    j["p"] = c.p;
    j["grid"] = c.h;
    j["directions"] = c.directions;
  } else if (s == "apply") {
    j["shape"] = c.shape;
    j["function"] = c.function;
    j["p"] = c.p;
    j["grid"] = c.h;
    j["operator"] = c.op_kind;
    if (!c.body.empty()) j["body"] = c.body;
    j["directions"] = c.directions;
  } else if (s == "eigensolve") {
    j["shape"] = c.shape;
    j["p"] = c.p;
    j["mode"] = c.mode;
    j["grid"] = c.h;
    j["directions"] = c.directions;
    j["max_iterations"] = c.max_iterations;
    j["tol_rel"] = c.tol_rel;
    j["init"] = c.init;
    if (!c.function.empty()) j["function"] = c.function;
    j["seed"] = c.seed;
    j["warm_start"] = c.warm_start;
    j["multistart"] = c.multistart;
    j["minimizer"] = c.minimizer;
    j["certify"] = c.certify;
  } else if (s == "cheeger") {
    j["shape"] = c.shape;
    j["family"] = c.family;
    j["budget"] = c.budget;
  } else if (s == "verify") {
    j["suite"] = c.suite;
    j["p"] = c.p;
    j["grid"] = c.h;
    j["directions"] = c.directions;
    j["seed"] = c.seed;
    j["tol_rel"] = c.tol_rel;
  }
  if (!c.out.empty()) j["out"] = c.out;
  if (!c.csv.empty()) j["csv"] = c.csv;
  if (!c.config.empty()) j["config"] = c.config;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f) throw InputError("cannot write '" + path + "'");
}

void emit(const RunConfig& c, Json payload) {
  Json j;
  j["config"] = config_json(c);
  for (auto& [k, v] : payload.items()) j[k] = std::move(v);
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty())
    std::cout << text;
  else
    write_text(c.out, text);
}

int run_constants(const RunConfig& c) {
  if (c.n != 2) throw InputError("n: only n = 2 is supported");
  require_positive(c.p, "p");
  char* out = nullptr;
  check(affeig_constants_json(c.n, c.p, c.max_width, &out));
  emit(c, take(out));
  return kOk;
}

int run_body(const RunConfig& c) {
  require_directions(c.directions);
  ShapeHandle shape;
  load_shape(c.shape, shape);
  char* out = nullptr;
  check(affeig_body_json(shape.ptr, c.op.c_str(), c.p, c.directions, &out));
  emit(c, take(out));
  return kOk;
}

int run_energy(const RunConfig& c) {
  require_positive(c.h, "grid");
  require_directions(c.directions);
  ShapeHandle shape;
  load_shape(c.shape, shape);
  FunctionHandle f;
  load_function(c.function, shape, c.h, f);
  char* out = nullptr;
  check(affeig_energy_json(f.ptr, c.p, c.directions, &out));
  emit(c, take(out));
  return kOk;
}

int run_apply(const RunConfig& c) {
  require_positive(c.h, "grid");
  require_directions(c.directions);
  ShapeHandle shape, body;
  load_shape(c.shape, shape);
  if (!c.body.empty()) load_shape(c.body, body);
  FunctionHandle f;
  load_function(c.function, shape, c.h, f);
  char* out = nullptr;
  check(affeig_apply_json(f.ptr, c.p, c.op_kind.c_str(), body.ptr, c.directions, &out));
  emit(c, take(out));
  return kOk;
}

int run_eigensolve(const RunConfig& c) {
  require_positive(c.h, "grid");
  require_directions(c.directions);
  ShapeHandle shape;
  load_shape(c.shape, shape);
  FunctionHandle init;
  if (c.init == "file") {
    if (c.function.empty()) throw InputError("init 'file' needs --function");
    load_function(c.function, shape, c.h, init);
  }
  affeig_solve_options o;
  affeig_solve_options_default(&o);
  o.p = c.p;
  o.h = c.h;
  o.directions = c.directions;
  o.max_iterations = c.max_iterations;
  o.tol_rel = c.tol_rel;
  o.mode = c.mode.c_str();
  o.init = c.init.c_str();
  o.seed = c.seed;
  o.warm_start = c.warm_start ? 1 : 0;
  o.multistart = c.multistart;
  o.init_function = init.ptr;

  affeig_result* raw = nullptr;
  check(affeig_eigensolve(shape.ptr, &o, &raw));
  std::unique_ptr<affeig_result, void (*)(affeig_result*)> result(raw, affeig_result_free);
  char* out = nullptr;
  check(affeig_result_json(result.get(), c.minimizer ? 1 : 0, c.certify ? 1 : 0, &out));
  Json j = take(out);
  int code = kOk;
  if (c.certify) {
    const Json& cert = j["certificate"];
    const bool ok = cert.value("nonnegative", false) && cert.value("normalized", false) &&
                    cert.value("residual_ok", false) && cert.value("pairing_ok", false);
    if (!ok) code = kFailed;
  }
  emit(c, std::move(j));
  return code;
}

int run_cheeger(const RunConfig& c) {
  if (c.budget <= 0) throw InputError("budget must be positive");
  ShapeHandle shape;
  load_shape(c.shape, shape);
  char* out = nullptr;
  check(affeig_cheeger_json(shape.ptr, c.family.c_str(), c.budget, &out));
  emit(c, take(out));
  return kOk;
}

int run_verify(const RunConfig& c) {
  require_positive(c.h, "grid");
  require_positive(c.tol_rel, "tol_rel");
  require_directions(c.directions);
  affeig_verify_options o;
  affeig_verify_options_default(&o);
  o.p = c.p;
  o.h = c.h;
  o.directions = c.directions;
  o.seed = c.seed;
  o.tol_rel = c.tol_rel;
  char* json = nullptr;
  char* csv = nullptr;
  int all_pass = 0;
  check(affeig_verify(c.suite.c_str(), &o, &json, c.csv.empty() ? nullptr : &csv, &all_pass));
  Json j = take(json);
  if (!c.csv.empty()) write_text(c.csv, take_string(csv));
  emit(c, std::move(j));
  return all_pass ? kOk : kFailed;
}

// Turns {"p": 3, "warm_start": true, ...} into flag tokens placed before the user's own flags,
// so that later command-line values win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw InputError("config '" + path + "': top level must be an object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand" || key == "config") continue;
    std::string flag = "--" + key;
    for (char& ch : flag)
      if (ch == '_') ch = '-';
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(value.dump());
    } else {
      throw InputError("config '" + path + "': field '" + key + "' must be a scalar");
    }
  }
  return out;
}

// Splices config-file flags in right after the subcommand name.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  static const std::vector<std::string> kCommands = {"constants", "body",    "energy", "apply",
                                                     "eigensolve", "cheeger", "verify"};
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i)
    if (std::find(kCommands.begin(), kCommands.end(), args[i]) != kCommands.end()) {
      at = i + 1;
      break;
    }
  if (at > args.size()) return args;
  const std::vector<std::string> extra = config_tokens(path);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return args;
}

int exit_for(affeig_status s) { return s == AFFEIG_ERR_INTERNAL ? kInternal : kInput; }

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Affine p-Laplacian eigenvalues, affine energies and convex-geometry checks"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(affeig_version()));

  auto global = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--out", c.out, "Write JSON here instead of stdout");
    sub->add_option("--config", c.config, "JSON file with flag values; command-line flags override it");
    sub->add_option("--threads", c.threads, "Worker threads (default: AFFEIG_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* constants = app.add_subcommand("constants", "Closed-form constants");
  constants->add_option("--n", c.n, "Dimension")->capture_default_str();
  constants->add_option("--p", c.p, "Exponent")->capture_default_str();
  constants->add_option("--max-width", c.max_width, "Domain width for the domain-dependent constant");
  global(constants);

  auto* body = app.add_subcommand("body", "Convex-body functionals");
  body->add_option("--shape", c.shape, "Shape file or builtin:NAME")->required();
  body->add_option("--op", c.op, "polar|volume|santalo|centroid|projection")->required();
  body->add_option("--p", c.p)->capture_default_str();
  body->add_option("--directions", c.directions)->capture_default_str();
  global(body);

  auto* energy = app.add_subcommand("energy", "Affine energy of a grid function");
  energy->add_option("--shape", c.shape)->required();
  energy->add_option("--function", c.function, "builtin:NAME or file:PATH")->required();
  energy->add_option("--p", c.p)->capture_default_str();
  energy->add_option("--grid", c.h, "Lattice spacing")->capture_default_str();
  energy->add_option("--directions", c.directions)->capture_default_str();
  global(energy);

  auto* apply = app.add_subcommand("apply", "Apply an operator to a grid function");
  apply->add_option("--shape", c.shape)->required();
  apply->add_option("--function", c.function)->required();
  apply->add_option("--p", c.p)->capture_default_str();
  apply->add_option("--grid", c.h)->capture_default_str();
  apply->add_option("--operator", c.op_kind, "affine|classical|wulff")->required();
  apply->add_option("--body", c.body, "Body shape for the wulff operator");
  apply->add_option("--directions", c.directions)->capture_default_str();
  global(apply);

  auto* eig = app.add_subcommand("eigensolve", "First Dirichlet eigenvalue");
  eig->add_option("--shape", c.shape)->required();
  eig->add_option("--p", c.p)->capture_default_str();
  eig->add_option("--mode", c.mode, "affine|classical")->capture_default_str();
  eig->add_option("--grid", c.h)->capture_default_str();
  eig->add_option("--directions", c.directions)->capture_default_str();
  eig->add_option("--max-iterations", c.max_iterations)->capture_default_str();
  eig->add_option("--tol-rel", c.tol_rel)->capture_default_str();
  eig->add_option("--init", c.init, "bump|classical-eigen|file")->capture_default_str();
  eig->add_option("--function", c.function, "Initial iterate when --init file");
  eig->add_option("--seed", c.seed)->capture_default_str();
  eig->add_flag("--warm-start", c.warm_start, "Start from the classical minimizer");
  eig->add_option("--multistart", c.multistart)->capture_default_str();
  eig->add_flag("--minimizer", c.minimizer, "Include the minimizer field");
  eig->add_flag("--certify", c.certify, "Attach the weak-form certificate; exit 1 if it fails");
  global(eig);

  auto* cheeger = app.add_subcommand("cheeger", "Affine and classical Cheeger search");
  cheeger->add_option("--shape", c.shape)->required();
  cheeger->add_option("--family", c.family, "disk|ellipse|rounded-square|affine-template|all")
      ->capture_default_str();
  cheeger->add_option("--budget", c.budget)->capture_default_str();
  global(cheeger);

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", c.suite,
                     "all|comparison|poincare|faber-krahn|lambda|invariance|unbounded|geometry")
      ->capture_default_str();
  verify->add_option("--p", c.p)->capture_default_str();
  verify->add_option("--grid", c.h)->capture_default_str();
  verify->add_option("--directions", c.directions)->capture_default_str();
  verify->add_option("--seed", c.seed)->capture_default_str();
  verify->add_option("--tol-rel", c.tol_rel)->capture_default_str();
  verify->add_option("--csv", c.csv, "Also write a CSV table");
  global(verify);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "affeig: " << e.what() << "\n";
    return kInput;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (c.threads > 0) check(affeig_set_threads(c.threads));
    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "constants") return run_constants(c);
    if (c.subcommand == "body") return run_body(c);
    if (c.subcommand == "energy") return run_energy(c);
    if (c.subcommand == "apply") return run_apply(c);
    if (c.subcommand == "eigensolve") return run_eigensolve(c);
    if (c.subcommand == "cheeger") return run_cheeger(c);
    if (c.subcommand == "verify") return run_verify(c);
    return kInput;
  } catch (const ApiError& e) {
    std::cerr << "affeig: " << e.what() << "\n";
    return exit_for(e.status);
  } catch (const InputError& e) {
    std::cerr << "affeig: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "affeig: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
