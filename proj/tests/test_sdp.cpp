#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "netcon/sdp.hpp"
#include "netcon/sdpa_io.hpp"

using namespace netcon;

namespace {

Graph test_graph() { return Graph::make(4, {{1, 2}, {2, 3}, {3, 4}, {4, 2}}); }

DistributedAlgorithm dgd(double rho, double eta, bool strict) {
  DgdParams p;
  p.rho = {rho, rho, rho, rho};
  p.eta = {eta, eta, eta, eta};
  p.mu = 0.05;
  p.K = 1.0;
  p.n = 1;
  return dgd_algorithm(p, test_graph(), {}, strict);
}

// One scalar variable v, arbitrary 1x1-or-larger affine constraints.
LmiProgram one_var_program(std::vector<AffineLmi> cons) {
  LmiProgram prog;
  VarId v{VarKind::P, 0, 0, 0};
  prog.variables = {v};
  prog.index[v] = 0;
  prog.constraints = std::move(cons);
  return prog;
}

AffineLmi affine1(double c0, double c1, Sense sense) {
  AffineLmi lmi;
  lmi.dim = 1;
  lmi.constant = SymMatrix::scaled_identity(1, c0);
  lmi.terms[VarId{VarKind::P, 0, 0, 0}] = SymMatrix::scaled_identity(1, c1);
  lmi.sense = sense;
  return lmi;
}

// Closed-form witness for the scalar consensus-gradient program at gamma=1:
// P=1, alpha=eta/(K+mu), S=-rho, Q=-alpha*K*mu, R balances the eta^2 leak.
// Valid whenever eta*(K+mu) < 2.
std::vector<double> dgd_hint(const LmiProgram& prog, double rho, double eta,
                             double mu, double K) {
  double alpha = eta / (K + mu);
  double denom = 2.0 * alpha - eta * eta;
  REQUIRE(denom > 0.0);
  double r = rho * rho + (rho * eta) * (rho * eta) / denom + 1e-9;
  std::vector<double> x(prog.variables.size(), 0.0);
  for (std::size_t i = 0; i < prog.variables.size(); ++i) {
    const VarId& v = prog.variables[i];
    switch (v.kind) {
      case VarKind::P: x[i] = 1.0; break;
      case VarKind::Alpha: x[i] = alpha; break;
      case VarKind::Q: x[i] = -alpha * K * mu; break;
      case VarKind::S: x[i] = -rho; break;
      case VarKind::R: x[i] = r; break;
    }
  }
  return x;
}

}  // namespace

TEST_CASE("scalar box problem reaches its optimal slack") {
  // diag(v, 1 - v) >= 0 has its best min-eigenvalue 0.5 at v = 0.5.
  AffineLmi lmi;
  lmi.dim = 2;
  lmi.constant = SymMatrix{{0, 0}, {0, 1}};
  SymMatrix t(2);
  t.set(0, 0, 1.0);
  t.set(1, 1, -1.0);
  lmi.terms[VarId{VarKind::P, 0, 0, 0}] = t;
  lmi.sense = Sense::Psd;
  LmiProgram prog = one_var_program({lmi});

  SolveOptions opts;
  opts.box_bound = 10.0;
  opts.optimize = true;
  FeasibilityResult res = solve_feasibility(prog, opts);
  CHECK(res.status == Feasibility::Feasible);
  CHECK(res.margin == doctest::Approx(0.5).epsilon(1e-3));
  REQUIRE(res.witness_x.size() == 1);
  CHECK(res.witness_x[0] == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(res.upper_bound >= res.margin - 1e-12);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->values.size() == 1);
}

TEST_CASE("contradictory scalar bounds are certified infeasible") {
  // v >= 1 and -v >= 1 as 1x1 LMIs.
  LmiProgram prog =
      one_var_program({affine1(-1.0, 1.0, Sense::Psd), affine1(-1.0, -1.0, Sense::Psd)});
  FeasibilityResult res = solve_feasibility(prog);
  CHECK(res.status == Feasibility::Infeasible);
  CHECK(res.upper_bound <= 0.0);
  CHECK(!res.witness.has_value());
}

TEST_CASE("constant programs are decided by direct evaluation") {
  LmiProgram feasible;
  AffineLmi c;
  c.dim = 2;
  c.constant = SymMatrix{{2, 0}, {0, 3}};
  feasible.constraints = {c};
  FeasibilityResult res = solve_feasibility(feasible);
  CHECK(res.status == Feasibility::Feasible);
  CHECK(res.margin == doctest::Approx(2.0));
  CHECK(res.witness.has_value());

  c.constant = SymMatrix{{2, 0}, {0, -1}};
  feasible.constraints = {c};
  res = solve_feasibility(feasible);
  CHECK(res.status == Feasibility::Infeasible);

  c.constant = SymMatrix::scaled_identity(2, 1e-8);
  feasible.constraints = {c};
  res = solve_feasibility(feasible);
  CHECK(res.status == Feasibility::Undecided);
}

TEST_CASE("consensus-gradient program inside the classical region is feasible") {
  DistributedAlgorithm alg = dgd(0.101, 0.051, true);
  LmiProgram prog = build_program(alg, 1.0, true);
  FeasibilityResult res = solve_feasibility(prog);
  REQUIRE(res.status == Feasibility::Feasible);
  CHECK(res.margin > 1e-7);

  // The gate already ran inside the solver; run it again here to make the
  // soundness contract visible.
  WitnessCheck check = verify_witness(prog, res.witness_x, kEpsPost);
  CHECK(check.ok);
  CHECK(check.min_margin == doctest::Approx(res.margin));
  CHECK(check.constraint_margins.size() == prog.constraints.size());
}

TEST_CASE("closed-form hint certifies instantly and deterministically") {
  DistributedAlgorithm alg = dgd(0.201, 0.101, true);
  LmiProgram prog = build_program(alg, 1.0, true);
  SolveOptions opts;
  opts.hints = {dgd_hint(prog, 0.201, 0.101, 0.05, 1.0)};
  FeasibilityResult a = solve_feasibility(prog, opts);
  FeasibilityResult b = solve_feasibility(prog, opts);
  REQUIRE(a.status == Feasibility::Feasible);
  CHECK(a.iterations == 0);
  CHECK(b.status == Feasibility::Feasible);
  CHECK(a.margin == b.margin);
  CHECK(a.witness_x == b.witness_x);
}

TEST_CASE("same seed reproduces the full solve bitwise") {
  DistributedAlgorithm alg = dgd(0.151, 0.201, true);
  LmiProgram prog = build_program(alg, 1.0, true);
  SolveOptions opts;
  opts.seed = 42;
  FeasibilityResult a = solve_feasibility(prog, opts);
  FeasibilityResult b = solve_feasibility(prog, opts);
  CHECK(a.status == b.status);
  CHECK(a.margin == b.margin);
  CHECK(a.iterations == b.iterations);
  CHECK(a.witness_x == b.witness_x);
}

TEST_CASE("doubling the box doubles the margin of homogeneous programs") {
  for (auto [rho, eta] : {std::pair{0.101, 0.051}, {0.251, 0.301}, {0.051, 0.501}}) {
    DistributedAlgorithm alg = dgd(rho, eta, true);
    LmiProgram prog = build_program(alg, 1.0, true);
    SolveOptions opts;
    FeasibilityResult at_b = solve_feasibility(prog, opts);
    opts.box_bound = 2e4;
    FeasibilityResult at_2b = solve_feasibility(prog, opts);
    REQUIRE(at_b.status == Feasibility::Feasible);
    REQUIRE(at_2b.status == Feasibility::Feasible);
    // Strict shifts break exact proportionality at the 1e-7 level, nothing
    // more; the margins themselves sit orders of magnitude above that.
    CHECK(at_2b.margin == doctest::Approx(2.0 * at_b.margin).epsilon(1e-4));
  }
}

TEST_CASE("feasibility is monotone in the contraction rate") {
  DistributedAlgorithm alg = dgd(0.101, 0.051, false);
  FeasibilityResult lo = solve_feasibility(build_program(alg, 0.9999, false));
  if (lo.status == Feasibility::Feasible) {
    for (double gamma : {0.99995, 1.0}) {
      FeasibilityResult hi = solve_feasibility(build_program(alg, gamma, false));
      CHECK(hi.status == Feasibility::Feasible);
    }
  }
  // Whatever the bisection landing point, gamma = 1 must accept the witness
  // found at any certified gamma < 1 (the local constraints only relax).
  GammaBisection bis = bisect_gamma(alg);
  if (bis.contractive) {
    LmiProgram at_one = build_program(alg, 1.0, false);
    WitnessCheck check = verify_witness(at_one, bis.result.witness_x, kEpsPost);
    CHECK(check.ok);
  }
}

TEST_CASE("scalar self-map bisects to its squared spectral rate") {
  // Single agent x+ = 0.5 x, no coupling, no oracle influence on the state:
  // V = P x^2 decays exactly by 0.25 per step, so gamma* = 0.25.
  Matrix one{{1}}, zero{{0}}, half{{0.5}};
  AgentDynamics dyn = AgentDynamics::make(half, zero, zero, one, zero, zero,
                                          one, zero, zero);
  DistributedAlgorithm alg;
  alg.agents = {Agent{dyn, OracleSpec{{sector_monotone_lipschitz(0.5, 1.0, 1)}, nullptr}}};
  alg.network = network_explicit(Matrix{{0}});

  GammaBisection bis = bisect_gamma(alg);
  REQUIRE(bis.contractive);
  CHECK(bis.gamma_star >= 0.25);
  CHECK(bis.gamma_star <= 0.25 + 2e-3);
  CHECK(bis.result.status == Feasibility::Feasible);

  // Rates below the true decay are rejected outright.
  FeasibilityResult too_fast = solve_feasibility(build_program(alg, 0.2, false));
  CHECK(too_fast.status != Feasibility::Feasible);
}

TEST_CASE("infeasible at rate one reports not contractive") {
  // Far-corner step sizes blow up consensus, so even gamma = 1 fails.
  DistributedAlgorithm alg = dgd(1.401, 1.951, false);
  SolveOptions opts;
  opts.max_iter = 400;
  GammaBisection bis = bisect_gamma(alg, opts);
  CHECK(!bis.contractive);
  CHECK(bis.gamma_star == 1.0);
  CHECK(bis.result.status != Feasibility::Feasible);
}

TEST_CASE("assignments round-trip through name-value maps") {
  DistributedAlgorithm alg = dgd(0.101, 0.051, true);
  LmiProgram prog = build_program(alg, 1.0, true);
  std::vector<double> x(prog.variables.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i) - 3.5;
  Assignment a = make_assignment(prog, x);
  CHECK(assignment_vector(prog, a) == x);

  Assignment missing = a;
  missing.values.erase(missing.values.begin());
  CHECK_THROWS_AS(assignment_vector(prog, missing), SolverError);
}

TEST_CASE("witness verification rejects box and sign violations") {
  LmiProgram prog = one_var_program({affine1(0.0, 1.0, Sense::Psd)});
  WitnessCheck inside = verify_witness(prog, {5.0}, kEpsPost, 10.0);
  CHECK(inside.ok);
  CHECK(inside.min_margin == doctest::Approx(5.0));
  WitnessCheck outside = verify_witness(prog, {50.0}, kEpsPost, 10.0);
  CHECK(!outside.ok);

  prog.nonneg = {0};
  WitnessCheck negative = verify_witness(prog, {-0.5}, -1.0, 10.0);
  CHECK(!negative.ok);
}

TEST_CASE("problem export carries dimensions, names, and the slack column") {
  DistributedAlgorithm alg = dgd(0.101, 0.051, true);
  LmiProgram prog = build_program(alg, 1.0, true);
  std::ostringstream os;
  write_sdp_problem(os, prog, 1e4);
  std::string text = os.str();
  const int d = int(prog.variables.size());
  CHECK(text.find(std::to_string(d + 1) + " = mDIM") != std::string::npos);
  CHECK(text.find(std::to_string(prog.constraints.size() + 1) + " = nBLOCK") !=
        std::string::npos);
  CHECK(text.find("P(0,0,0)") != std::string::npos);
  CHECK(text.find("alpha(0,0)") != std::string::npos);
  // Every block needs the -1 slack diagonal from variable d+1.
  CHECK(text.find("\n" + std::to_string(d + 1) + " 1 1 1 -1\n") != std::string::npos);
}

TEST_CASE("external results are gated, not trusted") {
  DistributedAlgorithm alg = dgd(0.101, 0.051, true);
  LmiProgram prog = build_program(alg, 1.0, true);

  FeasibilityResult own = solve_feasibility(prog);
  REQUIRE(own.status == Feasibility::Feasible);
  std::ostringstream serialized;
  serialized << "* external solver output\n";
  serialized.precision(17);
  for (double v : own.witness_x) serialized << v << "\n";
  std::istringstream good(serialized.str());
  FeasibilityResult imported = import_external_result(good, prog);
  CHECK(imported.status == Feasibility::Feasible);
  CHECK(imported.margin == doctest::Approx(own.margin));

  std::istringstream zeros("0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0");
  FeasibilityResult rejected = import_external_result(zeros, prog);
  CHECK(rejected.status == Feasibility::Undecided);

  std::istringstream garbage("1 2 three");
  CHECK_THROWS_AS(import_external_result(garbage, prog), ConfigError);
  std::istringstream short_input("1 2 3");
  CHECK_THROWS_AS(import_external_result(short_input, prog), ConfigError);
}

TEST_CASE("option validation") {
  LmiProgram prog = one_var_program({affine1(0.0, 1.0, Sense::Psd)});
  SolveOptions opts;
  opts.box_bound = -1.0;
  CHECK_THROWS_AS(solve_feasibility(prog, opts), InvalidParameter);
  opts = {};
  opts.eps = 0.0;
  CHECK_THROWS_AS(solve_feasibility(prog, opts), InvalidParameter);
  CHECK_THROWS_AS(bisect_gamma(dgd(0.1, 0.1, false), SolveOptions{}, 0.0),
                  InvalidParameter);
  LmiProgram empty;
  CHECK_THROWS_AS(solve_feasibility(empty), EmptyInput);
}
