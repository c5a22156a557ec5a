#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affeig/grid.hpp"
#include "affeig/operators.hpp"
#include "affeig/shape.hpp"

namespace affeig {

enum class SolveMode { Affine, Classical };
enum class InitKind { Bump, ClassicalEigen, File };

const char* to_string(SolveMode m);
const char* to_string(InitKind k);
SolveMode parse_mode(const std::string& s);
InitKind parse_init(const std::string& s);

struct SolveOptions {
  double p = 2.0;
  double h = 1.0 / 64.0;
  int directions = 64;
  int max_iterations = 2000;
  double armijo = 1e-4;
  double step_shrink = 0.5;
  int max_backtracks = 50;
  double tol_rel = 1e-6;
  SolveMode mode = SolveMode::Affine;
  InitKind init = InitKind::ClassicalEigen;
  std::optional<GridFunction> init_function;
  std::uint64_t seed = 0;
  // Affine mode: run the classical solve at the same p first and start from it.
  bool warm_start = false;
  int multistart = 1;
  int refactor_every = 1;

  void validate() const;
};

struct EigenResult {
  double lambda = 0.0;
  GridFunction minimizer;
  int iterations = 0;
  double el_residual = 0.0;
  std::vector<double> history;
  bool converged = false;
  SolveMode mode = SolveMode::Affine;
  double p = 2.0;
  int directions = 0;
  int starts = 1;
  int best_start = 0;
};

EigenResult minimize_rayleigh(const ShapeSpec& shape, const SolveOptions& opts);

struct ClassicalPair {
  double lambda;
  GridFunction eigenfunction;  // nonnegative, unit L2 norm
  int iterations;
};
// Smallest Dirichlet eigenvalue of the 5-point Laplacian by inverse power iteration.
ClassicalPair classical_eigen_pair(const ShapeSpec& shape, double h);
double classical_eigen_oracle(const ShapeSpec& shape, double h);

struct Certificate {
  double lambda = 0.0;
  double el_residual = 0.0;
  double energy_pairing = 0.0;  // pairing with psi = f
  double energy_p = 0.0;
  double mass_pairing = 0.0;
  double mass_p = 0.0;
  double lambda_from_pairing = 0.0;
  double min_value = 0.0;
  double lp_norm = 0.0;
  bool nonnegative = false;
  bool normalized = false;
  bool residual_ok = false;
  bool pairing_ok = false;
};
Certificate certify(const EigenResult& result, const OperatorContext& ctx, double tol_rel = 1e-6);
Certificate certify(const EigenResult& result, int directions, double tol_rel = 1e-6);

}  // namespace affeig
