// One pass/fail line per acceptance criterion. Exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "affeig/cheeger.hpp"
#include "affeig/constants.hpp"
#include "affeig/eigensolver.hpp"
#include "affeig/functions.hpp"
#include "affeig/operators.hpp"
#include "affeig/verify.hpp"

using namespace affeig;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records one check; the detail keeps the first failures readable.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    pass = false;
    if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

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

void fail_reports(Outcome& o, const std::vector<VerificationReport>& rs) {
  for (const auto& r : rs)
    o.require(r.pass, r.check + " on " + r.shape + fmt(" (margin %.4g, lhs %.6g, rhs %.6g)", r.margin, r.lhs, r.rhs));
}

const ShapeSpec kUnitSquare = ShapeSpec::rectangle({0, 0}, {1, 1});
const ShapeSpec kDisk = ShapeSpec::disk(1.0);

Outcome constants_fidelity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double c22 = constants::c_np(2, 2.0);
  o.require(rel(c22, 2.0 * std::sqrt(kPi)) <= 1e-12, fmt("c_{2,2} = %.17g", c22));
  for (int k = 2; k <= 20; ++k) {
    const double lhs = constants::unit_ball_volume(k), rhs = 2.0 * kPi / k * constants::unit_ball_volume(k - 2);
    o.require(rel(lhs, rhs) <= 1e-12, fmt("omega recurrence at k = %g", k));
  }
  o.require(std::abs(constants::sphere_moment(2, 2.0) - 0.5) <= 1e-10, "sphere moment");
  o.require(std::abs(constants::huang_li_constant(2, 2.0) - 1.0) <= 1e-10, "huang-li constant");
  o.require(constants::talenti_constant(1.0) == 2.0, "C(1) != 2");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 1.0, fmt("took %.3f s", secs));
  if (o.pass) o.detail = fmt("c_22 = %.15f, all identities exact, %.4f s", c22, secs);
  return o;
}

Outcome classical_calibration() {
  Outcome o;
  const double h = 1.0 / 64.0;
  SolveOptions s;
  s.h = h;
  s.mode = SolveMode::Classical;
  const double sq = minimize_rayleigh(kUnitSquare, s).lambda;
  const double five_point = 2.0 * 4.0 / (h * h) * std::pow(std::sin(kPi * h / 2.0), 2);
  o.require(rel(sq, 2.0 * kPi * kPi) <= 0.03, fmt("square %.6f vs 2 pi^2", sq));
  o.require(rel(sq, five_point) <= 0.01, fmt("square %.6f vs discrete %.6f", sq, five_point));
  const double disk = minimize_rayleigh(kDisk, s).lambda;
  const double j01 = constants::bessel_zero(0.0, 1);
  o.require(rel(disk, j01 * j01) <= 0.03, fmt("disk %.6f vs %.6f", disk, j01 * j01));
  if (o.pass)
    o.detail = fmt("square %.5f (2pi^2 %.5f), disk %.5f", sq, 2 * kPi * kPi, disk) +
               fmt(" (j01^2 %.5f), discrete gap %.2g", j01 * j01, rel(sq, five_point));
  return o;
}

Outcome ball_equality() {
  Outcome o;
  std::string d;
  for (double p : {1.5, 2.0, 3.0}) {
    SolveOptions s;
    s.p = p;
    s.h = 1.0 / 64.0;
    s.directions = 64;
    const double aff = minimize_rayleigh(kDisk, s).lambda;
    s.mode = SolveMode::Classical;
    const double cla = minimize_rayleigh(kDisk, s).lambda;
    const double gap = std::abs(aff - cla) / cla;
    o.require(gap <= 0.03, fmt("p = %g: gap %.4f", p, gap));
    d += fmt("p=%g gap %.2e ", p, gap);
  }
  if (o.pass) o.detail = d;
  return o;
}

Outcome affine_invariance() {
  Outcome o;
  VerifyOptions v;
  v.shears = {1.0};
  Verifier ver(v);
  const auto shapes = equal_area_shapes();
  std::string d;
  for (std::size_t i : {std::size_t{0}, std::size_t{2}}) {
    const auto rs = ver.invariance(shapes[i].first, shapes[i].second);
    fail_reports(o, rs);
    for (const auto& r : rs) d += r.check + " " + r.shape + fmt(" %.4f; ", std::abs(r.lhs / r.rhs - 1.0));
  }
  if (o.pass) o.detail = d;
  return o;
}

Outcome faber_krahn() {
  Outcome o;
  Verifier ver(VerifyOptions{});
  const auto rs = ver.faber_krahn();
  fail_reports(o, rs);
  if (o.pass) o.detail = fmt("%g reports pass", static_cast<double>(rs.size()));
  return o;
}

Outcome lambda_properties() {
  Outcome o;
  Verifier ver(VerifyOptions{});
  const auto rs = ver.lambda_properties();
  fail_reports(o, rs);
  int strict = 0;
  for (const auto& r : rs)
    if (r.check == "affine-above-reverse-bound") strict += r.margin > 0.0;
  o.require(strict == 5, "reverse bound not strict on every shape");
  if (o.pass) o.detail = fmt("(a), (b), (c) hold on %g shapes", 5);
  return o;
}

Outcome comparison() {
  Outcome o;
  int functions = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    VerifyOptions v;
    v.p = p;
    const auto rs = Verifier(v).comparison();
    fail_reports(o, rs);
    for (const auto& r : rs) o.require(r.tolerance <= 1e-8, "slack above 1e-8");
    functions = static_cast<int>(rs.size() / 2);
    o.require(functions >= 50, fmt("corpus has %g functions", functions));
  }
  if (o.pass) o.detail = fmt("%g functions x 4 exponents, zero failures", functions);
  return o;
}

Outcome unboundedness() {
  Outcome o;
  std::string d;
  for (double p : {1.0, 2.0}) {
    VerifyOptions v;
    v.p = p;
    const auto rs = Verifier(v).unboundedness();
    fail_reports(o, rs);
    const double expected = p == 1.0 ? 0.5 : 0.25;
    bool seen = false;
    for (const auto& r : rs)
      if (r.check == "log-log-slope") {
        seen = true;
        o.require(std::abs(r.lhs - expected) <= 0.25 * expected, fmt("p = %g slope %.4f", p, r.lhs));
        d += fmt("p=%g slope %.4f ", p, r.lhs);
      }
    o.require(seen, "no slope report");
  }
  if (o.pass) o.detail = d;
  return o;
}

Outcome operator_identities() {
  Outcome o;
  const DirectionSet d = DirectionSet::uniform(64);
  double wulff = 0.0, radial = 0.0, homog = 0.0, gateaux = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const GridFunction f = random_bump(kDisk, 1.0 / 32, 3);
    const OperatorContext ctx(f, p, d);
    const GridFunction a = affine_laplacian(ctx);
    wulff = std::max(wulff, max_diff(a, wulff_laplacian(f, body_G(ctx), p)) / max_abs(a.values()));

    const GridFunction r = GridFunction::sample(kDisk, 1.0 / 64, [](Vec2 x) { return std::max(0.0, 1.0 - dot(x, x)); });
    const GridFunction ar = affine_laplacian(OperatorContext(r, p, d)), cr = classical_p_laplacian(r, p);
    radial = std::max(radial, max_diff(ar, cr) / max_abs(cr.values()));

    for (double lam : {0.3, 7.5}) {
      const GridFunction b = affine_laplacian(OperatorContext(f.scaled(lam), p, d));
      homog = std::max(homog, max_diff(a.scaled(std::pow(lam, p - 1)), b) / max_abs(b.values()));
    }

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
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
      gateaux = std::max(gateaux, rel(weak_form_pairing(ctx, psi), fd));
    }
  }
  o.require(wulff <= 1e-8, fmt("Wulff route %.3g", wulff));
  o.require(radial <= 0.01, fmt("radial reduction %.3g", radial));
  o.require(homog <= 1e-10, fmt("homogeneity %.3g", homog));
  o.require(gateaux <= 1e-4, fmt("Gateaux %.3g", gateaux));
  if (o.pass) o.detail = fmt("Wulff %.2g, radial %.2g, homogeneity %.2g", wulff, radial, homog) + fmt(", Gateaux %.2g", gateaux);
  return o;
}

Outcome cheeger() {
  Outcome o;
  for (double r : {0.5, 1.0, 2.0}) {
    o.require(rel(classical_cheeger_ratio(ShapeSpec::disk(r)), 2.0 / r) <= 1e-12, fmt("classical disk r = %g", r));
    o.require(rel(affine_cheeger_ratio(ShapeSpec::disk(r), 256), 2.0 / r) <= 0.01, fmt("affine disk r = %g", r));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), logdet(std::log(0.25), std::log(4.0)), st(-1.0, 1.0),
      sh(-1.5, 1.5);
  const ShapeSpec pentagon = ShapeSpec::regular_polygon(5, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double s = std::exp(0.5 * logdet(rng)), t = std::exp(st(rng));
    const Mat2 a = Mat2::rotation(angle(rng)) * Mat2::diag(s * t, s / t) * Mat2::shear(sh(rng));
    worst = std::max(worst, det_scaling_defect(i % 2 ? pentagon : kUnitSquare, a));
  }
  o.require(worst <= 1e-6, fmt("det scaling defect %.3g", worst));
  // The geometry suite holds the candidate corpus, Santalo and Busemann-Petty checks.
  const auto rs = Verifier(VerifyOptions{}).geometry();
  fail_reports(o, rs);
  if (o.pass) o.detail = fmt("det scaling defect %.2g, %g geometry reports pass", worst, static_cast<double>(rs.size()));
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const std::string dir = (std::filesystem::temp_directory_path() / "affeig_acceptance").string();
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"verify-all", "verify --suite all --p 2 --seed 3"},
      {"verify-p1", "verify --suite comparison --p 1 --seed 3"},
      {"eigensolve", "eigensolve --shape builtin:square --p 1.5 --grid 0.03125 --multistart 3 --seed 5"},
      {"cheeger", "cheeger --shape builtin:hexagon --budget 1024"},
  };
  int compared = 0;
  for (const auto& [name, args] : runs) {
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      // Same output path for both runs: the path is part of the embedded config.
      const std::string path = dir + "/" + name + ".json";
      const std::string cmd = std::string("\"") + AFFEIG_CLI + "\" " + args + " --threads " + (k ? "8" : "1") +
                              " --out \"" + path + "\" > /dev/null 2>&1";
      std::filesystem::remove(path);
      const int status = std::system(cmd.c_str());
      // Verification failures exit 1 and still write their report.
      o.require(status != -1 && WEXITSTATUS(status) <= 1, name + " exited with " + std::to_string(WEXITSTATUS(status)));
      out[k] = slurp(path);
    }
    o.require(!out[0].empty() && out[0] == out[1], name + " differs between thread counts");
    ++compared;
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = fmt("%g runs byte-identical at 1 and 8 threads", compared);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"constants fidelity", constants_fidelity},
      {"classical solver calibration", classical_calibration},
      {"ball equality", ball_equality},
      {"affine invariance", affine_invariance},
      {"affine Faber-Krahn", faber_krahn},
      {"eigenvalue comparisons", lambda_properties},
      {"reverse Zhang and upper comparison", comparison},
      {"unboundedness", unboundedness},
      {"operator identities", operator_identities},
      {"Cheeger constants and geometry", cheeger},
      {"determinism across threads", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %-36s %s  (%.1f s)  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
