#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "netcon/lmi.hpp"

namespace netcon {

// A-posteriori verification margin for every certified constraint.
inline constexpr double kEpsPost = 1e-9;
// Absolute margin a strict (>0 / <0) constraint must clear.
inline constexpr double kEpsStrict = 1e-7;

struct SolveOptions {
  double box_bound = 1e4;  // variables live in [-B, B], alphas in [0, B]
  double eps = 1e-7;       // feasibility threshold on the slack t*
  int max_iter = 5000;     // cutting-plane iterations
  std::uint64_t seed = 0;
  // Candidate witnesses tried before the cutting-plane loop (warm starts from
  // closed-form guesses or neighboring grid cells). Each must be aligned with
  // LmiProgram::variables.
  std::vector<std::vector<double>> hints;
  // When false the solver stops at the first verified witness with slack
  // above eps. When true it keeps tightening until the upper and lower bound
  // on t* meet (used where the optimal margin itself is the quantity of
  // interest, e.g. toy calibration problems).
  bool optimize = false;
};

struct Assignment {
  std::map<VarId, double> values;
};

Assignment make_assignment(const LmiProgram& prog,
                           const std::vector<double>& x);
// Inverse of make_assignment; throws SolverError if a declared variable is
// missing from the assignment.
std::vector<double> assignment_vector(const LmiProgram& prog,
                                      const Assignment& a);

enum class Feasibility { Feasible, Infeasible, Undecided };

struct FeasibilityResult {
  Feasibility status = Feasibility::Undecided;
  // Achieved min-eigenvalue slack at the witness (Feasible), or the best
  // certified upper bound on the slack (Infeasible/Undecided where known).
  double margin = 0.0;
  // Certified upper bound on t* from the cutting-plane relaxation.
  double upper_bound = 0.0;
  std::optional<Assignment> witness;
  std::vector<double> witness_x;  // aligned with prog.variables when present
  int iterations = 0;
};

std::string to_string(Feasibility f);

// Maximize t subject to every constraint of prog shifted to F_j(v) - tI >= 0
// (strict senses additionally clear kEpsStrict), v in the option box. The
// nonsmooth concave objective min_j lambda_min(F_j(v)) is maximized by
// eigenvector cutting planes over an LP relaxation. Feasible iff a witness
// with slack > eps survives the verify_witness gate; Infeasible iff the
// relaxation proves t* <= 0; Undecided otherwise. Deterministic given seed.
FeasibilityResult solve_feasibility(const LmiProgram& prog,
                                    const SolveOptions& opts = {});

struct WitnessCheck {
  bool ok = false;
  double min_margin = 0.0;               // over all constraints
  std::vector<double> constraint_margins;  // per constraint, program order
};

// Independent a-posteriori check: re-assembles every constraint at x and
// demands lambda_min >= required (plus kEpsStrict on strict constraints),
// alphas >= 0, and |x| within the box. Never trusts solver state.
WitnessCheck verify_witness(const LmiProgram& prog,
                            const std::vector<double>& x,
                            double required = kEpsPost,
                            double box_bound = 1e4);

struct GammaBisection {
  bool contractive = false;  // false: not certifiable for any gamma < 1
  double gamma_star = 1.0;
  FeasibilityResult result;  // at gamma_star when contractive
  int solves = 0;
};

// Bisect the smallest feasible rate within gamma_tol. Feasibility is monotone
// in gamma (larger rates only relax the local constraints), so a witness
// found at the feasible endpoint seeds the solves below it.
GammaBisection bisect_gamma(const DistributedAlgorithm& alg,
                            const SolveOptions& opts = {},
                            double gamma_tol = 1e-3);

// Constraint in the exact form the solver certifies: flipped to >= 0, strict
// margin folded into the constant. Shared with the problem exporter.
AffineLmi solver_form(const AffineLmi& raw);

}  // namespace netcon
