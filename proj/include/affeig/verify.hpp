#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affeig/shape.hpp"

namespace affeig {

// Every tolerance used by the verification suites.
struct ToleranceTable {
  double solver = 0.03;             // relative, solver-derived quantities at h = 1/64, M = 64
  double solver_fine = 0.05;        // shear 2, at doubled resolution
  double contrast = 0.10;           // minimal classical spread under shear 1
  double gap_factor = 3.0;          // non-ellipse gaps must exceed gap_factor * solver
  double identity = 1e-6;           // closed-form identities
  double corpus_slack = 1e-8;       // comparison inequalities, relative
  double poincare = 1e-6;           // random test functions against the solved eigenvalue
  double minimizer = 1e-10;         // quotient of the returned minimizer
  double slope = 0.25;              // relative band around the predicted log-log slope
  double cheeger_disk = 0.01;       // polygonized disk against 2/r
  double cheeger_exact = 1e-12;     // classical disk ratio
  double busemann_petty = 1e-6;
  double santalo = 1e-6;
  double position = 0.02;           // maximal-volume position within the search grid
};

const ToleranceTable& tolerances();

struct VerificationReport {
  std::string suite;
  std::string check;     // which claim
  std::string relation;  // e.g. "lhs <= rhs"
  std::string shape;
  double p = 0.0;
  double h = 0.0;
  int directions = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool strict = false;  // strict checks need margin > 0
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  double p = 2.0;
  double h = 1.0 / 64.0;
  int directions = 64;
  int corpus_directions = 256;
  // The p = 1 energy integrates a kinked function of the direction; it needs more nodes.
  int corpus_directions_p1 = 4096;
  int geometry_directions = 4096;
  std::uint64_t seed = 0;
  double tol_rel = 1e-6;  // eigensolver stopping tolerance
  std::vector<int> ks = {4, 8, 16};
  std::vector<double> shears = {1.0, 2.0};
  void validate() const;
};

const std::vector<std::string>& suite_names();

class Verifier {
 public:
  explicit Verifier(VerifyOptions opts);
  const VerifyOptions& options() const { return opts_; }

  std::vector<VerificationReport> comparison();
  std::vector<VerificationReport> poincare(const std::string& name, const ShapeSpec& shape);
  std::vector<VerificationReport> faber_krahn();
  std::vector<VerificationReport> lambda_properties();
  std::vector<VerificationReport> invariance(const std::string& name, const ShapeSpec& shape);
  std::vector<VerificationReport> unboundedness();
  std::vector<VerificationReport> geometry();

  // "all" or one of suite_names().
  std::vector<VerificationReport> run(const std::string& suite);

  double affine_lambda(const std::string& name, const ShapeSpec& shape, double h);
  double classical_lambda(const std::string& name, const ShapeSpec& shape, double h);

 private:
  struct Cached {
    std::string key;
    double lambda;
  };
  VerificationReport base(const std::string& suite, const std::string& check, const std::string& shape) const;
  VerifyOptions opts_;
  std::vector<Cached> cache_;
};

// Equal-area test shapes (area pi): disk, sheared disk, square, 2:1 rectangle, triangle.
std::vector<std::pair<std::string, ShapeSpec>> equal_area_shapes();

bool all_pass(const std::vector<VerificationReport>& reports);

}  // namespace affeig
