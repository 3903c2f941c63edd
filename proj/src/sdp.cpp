#include "netcon/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "lp.hpp"
#include "netcon/rng.hpp"

namespace netcon {

AffineLmi solver_form(const AffineLmi& raw) {
  AffineLmi lmi = normalized_geq(raw);
  if (lmi.sense == Sense::Pd)
    lmi.constant += SymMatrix::scaled_identity(lmi.dim, -kEpsStrict);
  return lmi;
}

namespace {

// Constraint flipped to the >= 0 side with the strict margin folded into the
// constant, so the solver and the verifier share one uniform convention.
struct Compiled {
  int dim = 0;
  SymMatrix constant;  // includes the -kEpsStrict shift on strict senses
  std::vector<std::pair<int, SymMatrix>> terms;  // (variable position, coeff)
  bool homogeneous = false;  // before the strict shift
};

std::vector<Compiled> compile(const LmiProgram& prog) {
  if (prog.constraints.empty()) throw EmptyInput("lmi program has no constraints");
  std::vector<Compiled> out;
  out.reserve(prog.constraints.size());
  for (const AffineLmi& raw : prog.constraints) {
    Compiled c;
    c.homogeneous = normalized_geq(raw).constant.max_abs() == 0.0;
    AffineLmi lmi = solver_form(raw);
    c.dim = lmi.dim;
    c.constant = lmi.constant;
    for (const auto& [var, coeff] : lmi.terms)
      c.terms.emplace_back(prog.var_position(var), coeff);
    out.push_back(std::move(c));
  }
  return out;
}

SymMatrix assemble(const Compiled& c, const std::vector<double>& x) {
  Matrix acc = c.constant.full();
  for (const auto& [pos, coeff] : c.terms) {
    double v = x[std::size_t(pos)];
    if (v == 0.0) continue;
    const Matrix& t = coeff.full();
    for (std::size_t i = 0; i < acc.data().size(); ++i)
      acc.data()[i] += v * t.data()[i];
  }
  return SymMatrix::symmetrized(acc);
}

double quad_form(const SymMatrix& s, const std::vector<double>& q) {
  return dot(q, s.full() * q);
}

struct SolverState {
  const LmiProgram& prog;
  const std::vector<Compiled>& cons;
  CuttingPlaneLp& lp;
  int d;

  // Evaluates t(x) = min_j lambda_min(F_j(x)) and appends one supporting cut
  // per constraint at the minimal eigenvector.
  double eval_and_cut(const std::vector<double>& x) {
    double fmin = std::numeric_limits<double>::infinity();
    for (const Compiled& c : cons) {
      EigenDecomposition eig = sym_eigen(assemble(c, x));
      fmin = std::min(fmin, eig.values.front());
      std::vector<double> q(std::size_t(c.dim));
      for (int i = 0; i < c.dim; ++i) q[std::size_t(i)] = eig.vectors(i, 0);
      add_cut(c, q);
    }
    return fmin;
  }

  double eval_only(const std::vector<double>& x) const {
    double fmin = std::numeric_limits<double>::infinity();
    for (const Compiled& c : cons)
      fmin = std::min(fmin, sym_eigenvalues(assemble(c, x)).front());
    return fmin;
  }

  // q'F_j(x)q >= t as an LP row over z = (x, t).
  void add_cut(const Compiled& c, const std::vector<double>& q) {
    std::vector<double> r(std::size_t(d) + 1, 0.0);
    r.back() = 1.0;
    for (const auto& [pos, coeff] : c.terms) r[std::size_t(pos)] -= quad_form(coeff, q);
    lp.add_row(std::move(r), quad_form(c.constant, q), false);
  }
};

}  // namespace

std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "Feasible";
    case Feasibility::Infeasible: return "Infeasible";
    default: return "Undecided";
  }
}

Assignment make_assignment(const LmiProgram& prog, const std::vector<double>& x) {
  if (x.size() != prog.variables.size())
    throw DimensionMismatch("assignment vector length");
  Assignment a;
  for (std::size_t i = 0; i < x.size(); ++i) a.values[prog.variables[i]] = x[i];
  return a;
}

std::vector<double> assignment_vector(const LmiProgram& prog, const Assignment& a) {
  std::vector<double> x(prog.variables.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = a.values.find(prog.variables[i]);
    if (it == a.values.end())
      throw SolverError("assignment is missing " + to_string(prog.variables[i]));
    x[i] = it->second;
  }
  return x;
}

WitnessCheck verify_witness(const LmiProgram& prog, const std::vector<double>& x,
                            double required, double box_bound) {
  if (x.size() != prog.variables.size())
    throw DimensionMismatch("witness length does not match program");
  WitnessCheck check;
  check.ok = true;
  const double box_slack = 1e-9 * std::max(1.0, box_bound);
  for (double v : x) {
    if (!std::isfinite(v) || std::abs(v) > box_bound + box_slack) check.ok = false;
  }
  for (int idx : prog.nonneg) {
    if (x[std::size_t(idx)] < 0.0) check.ok = false;
  }
  std::vector<Compiled> cons = compile(prog);
  check.min_margin = std::numeric_limits<double>::infinity();
  for (const Compiled& c : cons) {
    SymMatrix f = assemble(c, x);
    double lam = sym_eigenvalues(f).front();
    check.constraint_margins.push_back(lam);
    check.min_margin = std::min(check.min_margin, lam);
    if (!is_psd(f, required)) check.ok = false;
  }
  return check;
}

FeasibilityResult solve_feasibility(const LmiProgram& prog, const SolveOptions& opts) {
  if (!(opts.box_bound > 0.0)) throw InvalidParameter("box bound must be positive");
  if (!(opts.eps > 0.0)) throw InvalidParameter("eps must be positive");
  const double B = opts.box_bound;
  const std::vector<Compiled> cons = compile(prog);
  const int d = int(prog.variables.size());

  FeasibilityResult res;

  // Constant program: the slack is just the smallest eigenvalue on offer.
  if (d == 0) {
    double m = std::numeric_limits<double>::infinity();
    for (const Compiled& c : cons)
      m = std::min(m, sym_eigenvalues(c.constant).front());
    res.margin = m;
    res.upper_bound = m;
    if (m > opts.eps) {
      res.status = Feasibility::Feasible;
      res.witness = Assignment{};
      res.witness_x = {};
    } else if (m <= 0.0) {
      res.status = Feasibility::Infeasible;
    }
    return res;
  }

  std::vector<char> nonneg(std::size_t(d), 0);
  for (int idx : prog.nonneg) nonneg[std::size_t(idx)] = 1;
  auto clamp_box = [&](std::vector<double> v) {
    for (int k = 0; k < d; ++k) {
      double lo = nonneg[std::size_t(k)] ? 0.0 : -B;
      v[std::size_t(k)] = std::min(B, std::max(lo, v[std::size_t(k)]));
    }
    return v;
  };

  bool homogeneous = true;
  for (const Compiled& c : cons) homogeneous = homogeneous && c.homogeneous;

  // Any valid bound on t over the box caps the LP; Frobenius norms do.
  double t_cap = std::numeric_limits<double>::infinity();
  for (const Compiled& c : cons) {
    double cap = c.constant.fro_norm();
    for (const auto& term : c.terms) cap += B * term.second.fro_norm();
    t_cap = std::min(t_cap, cap);
  }
  t_cap = std::max(t_cap, 1.0);
  const double tol_inf = 1e-9 * std::max(1.0, t_cap);

  CuttingPlaneLp lp(d + 1);
  {
    // First d+1 rows are the LP's structural start basis: box tops then cap.
    std::vector<double> r(std::size_t(d) + 1, 0.0);
    for (int k = 0; k < d; ++k) {
      r[std::size_t(k)] = 1.0;
      lp.add_row(r, B, true);
      r[std::size_t(k)] = 0.0;
    }
    r.back() = 1.0;
    lp.add_row(r, t_cap, true);
    r.back() = 0.0;
    for (int k = 0; k < d; ++k) {
      r[std::size_t(k)] = -1.0;
      lp.add_row(r, nonneg[std::size_t(k)] ? 0.0 : B, true);
      r[std::size_t(k)] = 0.0;
    }
  }

  SolverState state{prog, cons, lp, d};

  double f_best = -std::numeric_limits<double>::infinity();
  std::vector<double> v_best;
  auto consider = [&](const std::vector<double>& v, double f) {
    if (f > f_best) {
      f_best = f;
      v_best = v;
    }
  };
  // Positive homogeneity: pushing a positive-slack point to the box surface
  // multiplies its pre-shift slack by the same factor.
  auto amplify = [&]() {
    if (!homogeneous || !(f_best > 0.0) || v_best.empty()) return;
    double vmax = 0.0;
    for (double v : v_best) vmax = std::max(vmax, std::abs(v));
    if (!(vmax > 0.0) || vmax >= B) return;
    std::vector<double> scaled = v_best;
    for (double& v : scaled) v *= B / vmax;
    double f = state.eval_only(scaled);
    consider(scaled, f);
  };

  auto finish_feasible = [&](int iterations, double upper) -> std::optional<FeasibilityResult> {
    WitnessCheck check = verify_witness(prog, v_best, kEpsPost, B);
    if (!check.ok || !(check.min_margin > opts.eps)) return std::nullopt;
    FeasibilityResult r;
    r.status = Feasibility::Feasible;
    r.margin = check.min_margin;
    r.upper_bound = upper;
    r.witness_x = v_best;
    r.witness = make_assignment(prog, v_best);
    r.iterations = iterations;
    return r;
  };

  double upper = t_cap;

  for (const std::vector<double>& hint : opts.hints) {
    if (int(hint.size()) != d)
      throw DimensionMismatch("hint length does not match program");
    std::vector<double> v = clamp_box(hint);
    consider(v, state.eval_and_cut(v));
  }
  amplify();
  if (!opts.optimize && f_best > opts.eps) {
    if (auto r = finish_feasible(0, upper)) return *r;
  }

  // Coordinate-direction cuts bound the LP away from wild first vertices.
  for (const Compiled& c : cons) {
    std::vector<double> q(std::size_t(c.dim), 0.0);
    for (int i = 0; i < c.dim; ++i) {
      q[std::size_t(i)] = 1.0;
      state.add_cut(c, q);
      q[std::size_t(i)] = 0.0;
    }
  }

  RngStream rng(opts.seed, 0x5d9f0ull);
  for (int probe = 0; probe < 3; ++probe) {
    std::vector<double> v(std::size_t(d), 0.0);
    for (int k = 0; k < d; ++k)
      v[std::size_t(k)] = nonneg[std::size_t(k)] ? B * rng.uniform() : B * rng.uniform(-1.0, 1.0);
    consider(v, state.eval_and_cut(v));
  }
  amplify();
  if (!opts.optimize && f_best > opts.eps) {
    if (auto r = finish_feasible(0, upper)) return *r;
  }

  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    CuttingPlaneLp::Solution sol;
    try {
      sol = lp.solve();
    } catch (const SolverError&) {
      break;  // degraded LP basis: report honestly as Undecided
    }
    upper = std::min(upper, sol.value);
    if (upper <= -tol_inf) {
      res.status = Feasibility::Infeasible;
      res.margin = upper;
      res.upper_bound = upper;
      res.iterations = it;
      return res;
    }

    std::vector<double> v_up = clamp_box(std::move(sol.z));
    v_up.pop_back();
    consider(v_up, state.eval_and_cut(v_up));
    if (!v_best.empty() && v_best != v_up) {
      std::vector<double> mid(std::size_t(d), 0.0);
      for (int k = 0; k < d; ++k)
        mid[std::size_t(k)] = 0.5 * (v_up[std::size_t(k)] + v_best[std::size_t(k)]);
      consider(mid, state.eval_and_cut(mid));
    }
    amplify();

    if (opts.optimize) {
      double gap = upper - f_best;
      if (gap <= std::max(1e-6, 1e-4 * std::max(1.0, std::abs(upper)))) {
        if (f_best > opts.eps) {
          if (auto r = finish_feasible(it, upper)) return *r;
        }
        if (upper <= opts.eps) break;  // pinned below eps: undecidable by design
      }
    } else if (f_best > opts.eps) {
      if (auto r = finish_feasible(it, upper)) return *r;
    }
    if (upper <= opts.eps && (!opts.optimize || upper - f_best <= 1e-6)) break;

    if (lp.row_count() > 3000) lp.prune(1500);
  }

  res.status = Feasibility::Undecided;
  res.margin = std::isfinite(f_best) ? f_best : upper;
  res.upper_bound = upper;
  res.iterations = std::min(it, opts.max_iter);
  return res;
}

GammaBisection bisect_gamma(const DistributedAlgorithm& alg, const SolveOptions& opts,
                            double gamma_tol) {
  if (!(gamma_tol > 0.0)) throw InvalidParameter("gamma_tol must be positive");
  GammaBisection out;

  SolveOptions cur = opts;
  FeasibilityResult at_one = solve_feasibility(build_program(alg, 1.0, false), cur);
  ++out.solves;
  if (at_one.status != Feasibility::Feasible) {
    out.contractive = false;
    out.gamma_star = 1.0;
    out.result = std::move(at_one);
    return out;
  }

  double lo = 0.0, hi = 1.0;
  FeasibilityResult best = std::move(at_one);
  bool below_one = false;
  while (hi - lo > gamma_tol) {
    double mid = 0.5 * (lo + hi);
    cur.hints = {best.witness_x};
    FeasibilityResult r = solve_feasibility(build_program(alg, mid, false), cur);
    ++out.solves;
    if (r.status == Feasibility::Feasible) {
      hi = mid;
      best = std::move(r);
      below_one = true;
    } else {
      lo = mid;
    }
  }

  out.contractive = below_one;
  out.gamma_star = hi;
  if (below_one) out.result = std::move(best);
  return out;
}

}  // namespace netcon
