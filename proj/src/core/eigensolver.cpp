#include "affeig/eigensolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "affeig/energy.hpp"
#include "affeig/errors.hpp"
#include "affeig/functions.hpp"

namespace affeig {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Gradients of the three P1 basis functions of a triangle, in triangle_nodes order and
// up to a common sign that cancels in the stiffness product.
constexpr Vec2 kBasis[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

class Problem {
 public:
  Problem(const GridFunction& shape_fn, const SolveOptions& o)
      : opts_(o),
        pow_(o.p),
        mesh_(shape_fn.lattice(), shape_fn.mask()),
        kernel_(DirectionSet::uniform(o.directions), o.p, mesh_.triangle_area()),
        templ_(shape_fn) {
    const auto& m = mesh_.mask();
    index_.assign(m.size(), -1);
    for (std::size_t k = 0; k < m.size(); ++k)
      if (m[k]) {
        index_[k] = static_cast<int>(unknowns_.size());
        unknowns_.push_back(k);
      }
    if (unknowns_.empty()) throw InvalidArgument("shape has no interior nodes at this grid spacing");
  }

  struct Eval {
    std::vector<Vec2> g;
    std::vector<double> npow;
    double energy = 0.0;
    double a = 0.0, q = 0.0, r = 0.0;
  };

  bool affine() const { return opts_.mode == SolveMode::Affine; }
  const P1Mesh& mesh() const { return mesh_; }
  const std::vector<std::size_t>& unknowns() const { return unknowns_; }
  const GridFunction& templ() const { return templ_; }

  void normalize(std::vector<double>& x) const {
    double s = 0.0;
    for (double& v : x) {
      v = std::abs(v);
      s += pow_.abs_pow(v);
    }
    const double n = pow_.root(s * mesh_.node_mass());
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("iterate vanished during descent");
    for (double& v : x) v /= n;
  }

  Eval evaluate(const std::vector<double>& x) const {
    Eval e;
    mesh_.gradients(x, e.g);
    double mass = 0.0;
    for (double v : x) mass += pow_.abs_pow(v);
    e.q = mass * mesh_.node_mass();
    double dir = 0.0;
    for (const auto& v : e.g) dir += pow_.abs_pow(norm(v));
    dir *= mesh_.triangle_area();
    if (affine()) {
      kernel_.norms_pow(e.g, e.npow);
      const double threshold = std::pow(1e-10, opts_.p) * dir;
      for (int k = 0; k < kernel_.half(); ++k)
        if (!(e.npow[k] > threshold)) throw DegenerateDirection(k, pow_.root(e.npow[k]), pow_.root(threshold));
      e.energy = kernel_.energy(e.npow);
      e.a = pow_.abs_pow(e.energy);
    } else {
      e.a = dir;
    }
    e.r = e.a / e.q;
    return e;
  }

  std::vector<double> weights(const Eval& e) const { return kernel_.direction_weights(e.npow, e.energy); }

  void flux(const Eval& e, std::vector<Vec2>& phi) const {
    if (affine()) {
      kernel_.flux(e.g, weights(e), phi);
      return;
    }
    phi.resize(e.g.size());
    for (std::size_t t = 0; t < e.g.size(); ++t) {
      const double n = norm(e.g[t]);
      phi[t] = n == 0.0 ? Vec2{} : e.g[t] * (opts_.p == 2.0 ? 1.0 : std::pow(n, opts_.p - 2.0));
    }
  }

  // Gradient of the quotient restricted to unknowns.
  Eigen::VectorXd gradient(const std::vector<double>& x, const Eval& e, const std::vector<Vec2>& phi) const {
    std::vector<double> s;
    mesh_.scatter(phi, s);
    Eigen::VectorXd g(unknowns_.size());
    const double p = opts_.p;
    for (std::size_t u = 0; u < unknowns_.size(); ++u) {
      const std::size_t k = unknowns_[u];
      g[u] = p * (s[k] - e.r * mesh_.node_mass() * pow_.signed_pow_m1(x[k])) / e.q;
    }
    return g;
  }

  SpMat preconditioner(const Eval& e) const {
    double mean = 0.0;
    for (const auto& v : e.g) mean += dot(v, v);
    mean /= std::max<std::size_t>(1, e.g.size());
    const double eps2 = 1e-6 * mean + 1e-300;
    std::vector<Mat2> d;
    if (affine()) {
      kernel_.hessians(e.g, weights(e), eps2, d);
    } else {
      d.resize(e.g.size());
      const double p = opts_.p;
      for (std::size_t t = 0; t < e.g.size(); ++t) {
        const Vec2 v = e.g[t];
        const double n2 = dot(v, v) + eps2;
        const double c = p == 2.0 ? 1.0 : std::pow(n2, 0.5 * (p - 2.0));
        d[t] = (Mat2::identity() + outer(v, v) * ((p - 2.0) / n2)) * c;
      }
    }
    std::vector<Triplet> trip;
    trip.reserve(9 * d.size());
    const double inv_h2 = 1.0 / (mesh_.lattice().h * mesh_.lattice().h);
    const double area = mesh_.triangle_area();
    for (std::size_t t = 0; t < d.size(); ++t) {
      std::uint32_t nodes[3];
      mesh_.triangle_nodes(t, nodes);
      for (int a = 0; a < 3; ++a) {
        const int ia = index_[nodes[a]];
        if (ia < 0) continue;
        const Vec2 da = d[t] * kBasis[a];
        for (int b = 0; b < 3; ++b) {
          const int ib = index_[nodes[b]];
          if (ib < 0) continue;
          trip.emplace_back(ia, ib, area * inv_h2 * dot(kBasis[b], da));
        }
      }
    }
    SpMat pm(unknowns_.size(), unknowns_.size());
    pm.setFromTriplets(trip.begin(), trip.end());
    return pm;
  }

  double residual(const std::vector<double>& x, const std::vector<Vec2>& phi, double lambda) const {
    return weak_defect(mesh_, phi, x, opts_.p, lambda);
  }

 private:
  const SolveOptions& opts_;
  Power pow_;
  P1Mesh mesh_;
  AffineKernel kernel_;
  GridFunction templ_;
  std::vector<int> index_;
  std::vector<std::size_t> unknowns_;
};

EigenResult descend(const Problem& prob, std::vector<double> x, const SolveOptions& o) {
  EigenResult res;
  res.mode = o.mode;
  res.p = o.p;
  res.directions = o.directions;
  prob.normalize(x);
  Problem::Eval ev = prob.evaluate(x);
  res.history.push_back(ev.r);
  std::vector<Vec2> phi;
  Eigen::SimplicialLDLT<SpMat> solver;
  bool analyzed = false;
  const double alpha0 = (o.p - 1.0) / o.p;
  double alpha_next = alpha0;
  double resid = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < o.max_iterations; ++it) {
    prob.flux(ev, phi);
    resid = prob.residual(x, phi, ev.r);
    const int n = static_cast<int>(res.history.size());
    if (n > 10) {
      const double drop = (res.history[n - 11] - res.history[n - 1]) / res.history[n - 1];
      if (drop < o.tol_rel && resid < 10.0 * o.tol_rel) {
        res.converged = true;
        break;
      }
    }
    const Eigen::VectorXd grad = prob.gradient(x, ev, phi);
    if (it % std::max(1, o.refactor_every) == 0) {
      const SpMat pm = prob.preconditioner(ev);
      if (!analyzed) {
        solver.analyzePattern(pm);
        analyzed = true;
      }
      solver.factorize(pm);
      if (solver.info() != Eigen::Success) throw Error("preconditioner factorization failed");
    }
    const Eigen::VectorXd dir = -solver.solve(grad);
    const double slope = grad.dot(dir);
    if (!(slope < 0.0)) break;
    double alpha = alpha_next;
    bool accepted = false;
    std::vector<double> trial(x.size());
    Problem::Eval tev;
    for (int bt = 0; bt <= o.max_backtracks; ++bt) {
      trial = x;
      const auto& unk = prob.unknowns();
      for (std::size_t u = 0; u < unk.size(); ++u) trial[unk[u]] += alpha * dir[u];
      prob.normalize(trial);
      tev = prob.evaluate(trial);
      if (tev.r <= ev.r + o.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= o.step_shrink;
    }
    if (!accepted) break;
    alpha_next = std::min(alpha0, 2.0 * alpha);
    x.swap(trial);
    ev = std::move(tev);
    res.history.push_back(ev.r);
  }
  if (!res.converged) {
    prob.flux(ev, phi);
    resid = prob.residual(x, phi, ev.r);
    // A stalled line search at roundoff level still counts when the residual is met.
    if (it < o.max_iterations && resid < 10.0 * o.tol_rel) res.converged = true;
  }
  res.iterations = it;
  res.lambda = ev.r;
  res.el_residual = resid;
  res.minimizer = prob.templ().with_values(std::move(x));
  return res;
}

std::vector<double> initial_values(const ShapeSpec& shape, const GridFunction& templ, const SolveOptions& o) {
  switch (o.init) {
    case InitKind::Bump:
      return builtin_function("bubble", shape, o.h).values();
    case InitKind::ClassicalEigen:
      return classical_eigen_pair(shape, o.h).eigenfunction.values();
    case InitKind::File: {
      if (!o.init_function) throw InvalidArgument("init 'file' requires an initial function");
      if (!(o.init_function->lattice() == templ.lattice()))
        throw InvalidArgument("initial function lattice does not match the shape lattice at this grid spacing");
      return templ.with_values(o.init_function->values()).values();
    }
  }
  return {};
}

}  // namespace

const char* to_string(SolveMode m) { return m == SolveMode::Affine ? "affine" : "classical"; }

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::Bump: return "bump";
    case InitKind::ClassicalEigen: return "classical-eigen";
    default: return "file";
  }
}

SolveMode parse_mode(const std::string& s) {
  if (s == "affine") return SolveMode::Affine;
  if (s == "classical") return SolveMode::Classical;
  throw InvalidArgument("mode must be 'affine' or 'classical', got '" + s + "'");
}

InitKind parse_init(const std::string& s) {
  if (s == "bump") return InitKind::Bump;
  if (s == "classical-eigen") return InitKind::ClassicalEigen;
  if (s == "file") return InitKind::File;
  throw InvalidArgument("init must be bump, classical-eigen or file, got '" + s + "'");
}

void SolveOptions::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be >= 1");
  if (!(p > 1.0)) throw InvalidArgument("the eigensolver needs p > 1; use the cheeger module for p = 1");
  if (!(h > 0.0)) throw InvalidArgument("grid spacing h must be positive");
  if (directions < 4 || directions % 4 != 0) throw InvalidArgument("direction count must be a positive multiple of 4");
  if (!(tol_rel > 0.0)) throw InvalidArgument("tol_rel must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) throw InvalidArgument("armijo parameter must lie in (0, 1)");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) throw InvalidArgument("step_shrink must lie in (0, 1)");
  if (multistart < 1) throw InvalidArgument("multistart must be >= 1");
}

EigenResult minimize_rayleigh(const ShapeSpec& shape, const SolveOptions& opts) {
  opts.validate();
  const GridFunction templ = GridFunction::zeros(shape, opts.h);
  std::vector<double> base;
  if (opts.mode == SolveMode::Affine && opts.warm_start) {
    SolveOptions c = opts;
    c.mode = SolveMode::Classical;
    c.warm_start = false;
    c.multistart = 1;
    base = minimize_rayleigh(shape, c).minimizer.values();
  } else {
    base = initial_values(shape, templ, opts);
  }
  const Problem prob(templ, opts);
  EigenResult best;
  for (int s = 0; s < opts.multistart; ++s) {
    std::vector<double> x = base;
    if (s > 0) {
      std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
      std::uniform_real_distribution<double> noise(-0.1, 0.1);
      for (double& v : x) v *= 1.0 + noise(rng);
    }
    EigenResult r = descend(prob, std::move(x), opts);
    if (s == 0 || r.lambda < best.lambda) {
      best = std::move(r);
      best.best_start = s;
    }
  }
  best.starts = opts.multistart;
  return best;
}

ClassicalPair classical_eigen_pair(const ShapeSpec& shape, double h) {
  const GridFunction templ = GridFunction::zeros(shape, h);
  const Lattice& l = templ.lattice();
  const auto& m = templ.mask();
  std::vector<int> index(m.size(), -1);
  int n = 0;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k]) index[k] = n++;
  if (n == 0) throw InvalidArgument("shape has no interior nodes at this grid spacing");
  std::vector<Triplet> trip;
  const double inv_h2 = 1.0 / (h * h);
  for (int j = 0; j < l.ny; ++j)
    for (int i = 0; i < l.nx; ++i) {
      const int a = index[l.index(i, j)];
      if (a < 0) continue;
      trip.emplace_back(a, a, 4.0 * inv_h2);
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        const int b = index[l.index(q[0], q[1])];
        if (b >= 0) trip.emplace_back(a, b, -inv_h2);
      }
    }
  SpMat lap(n, n);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SpMat> solver(lap);
  if (solver.info() != Eigen::Success) throw Error("5-point Laplacian factorization failed");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double lambda = x.dot(lap * x), prev = 0.0;
  int it = 0;
  for (; it < 1000; ++it) {
    x = solver.solve(x).normalized();
    prev = lambda;
    lambda = x.dot(lap * x);
    if (std::abs(lambda - prev) <= 1e-14 * lambda) break;
  }
  std::vector<double> values(m.size(), 0.0);
  const double sign = x.sum() < 0 ? -1.0 : 1.0;
  // Unit L2 norm under the lumped mass h^2.
  for (std::size_t k = 0; k < m.size(); ++k)
    if (index[k] >= 0) values[k] = std::max(0.0, sign * x[index[k]]) / h;
  return {lambda, templ.with_values(std::move(values)), it + 1};
}

double classical_eigen_oracle(const ShapeSpec& shape, double h) { return classical_eigen_pair(shape, h).lambda; }

Certificate certify(const EigenResult& result, const OperatorContext& ctx, double tol_rel) {
  if (result.mode != SolveMode::Affine) throw InvalidArgument("certify expects an affine-mode result");
  Certificate c;
  c.lambda = result.lambda;
  c.el_residual = el_residual(ctx, result.lambda);
  const SelfPairing sp = el_self_pairing(ctx, result.lambda);
  c.energy_pairing = sp.energy_term;
  c.energy_p = sp.energy_p;
  c.mass_pairing = sp.mass_term;
  c.mass_p = sp.mass_p;
  c.lambda_from_pairing = sp.energy_term / (sp.mass_term / result.lambda);
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ctx.f().values().size(); ++k)
    if (ctx.f().mask()[k]) mn = std::min(mn, ctx.f().values()[k]);
  c.min_value = mn;
  c.lp_norm = lp_norm(ctx.f(), ctx.p());
  c.nonnegative = mn >= 0.0;
  c.normalized = std::abs(c.lp_norm - 1.0) <= 1e-10;
  c.residual_ok = c.el_residual <= 10.0 * tol_rel;
  c.pairing_ok = std::abs(c.lambda_from_pairing - c.lambda) <= 1e-6 * c.lambda;
  return c;
}

Certificate certify(const EigenResult& result, int directions, double tol_rel) {
  const OperatorContext ctx(result.minimizer, result.p, DirectionSet::uniform(directions));
  return certify(result, ctx, tol_rel);
}

}  // namespace affeig
