#pragma once

#include <compare>
#include <map>
#include <vector>

#include "netcon/model.hpp"

namespace netcon {

// Scalar decision variables. P/Q/R are entries (a, b) with a <= b of a
// symmetric block owned by one agent; S entries are unrestricted (a, b); for
// Alpha, a is the sector-bound index and b is unused.
enum class VarKind { P, Alpha, Q, S, R };

struct VarId {
  VarKind kind = VarKind::P;
  int agent = 0;
  int a = 0;
  int b = 0;

  auto operator<=>(const VarId&) const = default;
};

std::string to_string(const VarId& v);

enum class Sense { Psd, Pd, Nsd, Nd };  // >=0, >0, <=0, <0

// Symmetric-matrix-valued expression, affine in the decision variables:
// constant + sum_v x[v] * terms[v].
struct AffineLmi {
  int dim = 0;
  SymMatrix constant;
  std::map<VarId, SymMatrix> terms;
  Sense sense = Sense::Psd;
};

struct LmiProgram {
  std::vector<AffineLmi> constraints;
  std::vector<VarId> variables;  // solve order
  std::vector<int> nonneg;       // indices into variables (the alphas)
  double gamma = 1.0;
  std::map<VarId, int> index;    // variable -> position

  int var_position(const VarId& v) const;
};

SymMatrix eval_lmi(const AffineLmi& lmi, const LmiProgram& prog,
                   const std::vector<double>& x);

// Same constraint flipped to the >=0 side (Nsd/Nd negate), so a solver can
// treat everything uniformly. The strict flag survives in the sense.
AffineLmi normalized_geq(const AffineLmi& lmi);

// Lemma-style local certificate for one agent: quadratic storage decrease at
// rate gamma against the oracle supply and the coupling supply,
//   [A B G; I 0 0]^T diag(-P, gamma P) [A B G; I 0 0]
//   + sum_j alpha_j [C_opt D_opt H_opt; 0 0 I]^T S_j [...]
//   + [C_con D_con H_con; 0 I 0]^T [Q S; S^T R] [...]  >= 0,
// affine in (P, alpha_j, Q, S, R) with gamma fixed.
AffineLmi local_dissipativity_lmi(const AgentDynamics& agent,
                                  const std::vector<SectorBound>& bounds,
                                  double gamma, int agent_index);

inline AffineLmi local_dissipativity_lmi(const AgentDynamics& agent,
                                         const SectorBound& bound,
                                         double gamma, int agent_index) {
  return local_dissipativity_lmi(agent, std::vector<SectorBound>{bound},
                                 gamma, agent_index);
}

// Network-level supply neutralization: Q + S M + M^T S^T + M^T R M with
// blockdiagonal (Q, S, R); <= 0, or < 0 on the strict path.
AffineLmi interconnection_lmi(const DistributedAlgorithm& alg, bool strict);

// N local constraints, one interconnection constraint, P_i > 0 side
// constraints, alphas marked nonnegative. strict requires gamma == 1.
LmiProgram build_program(const DistributedAlgorithm& alg, double gamma,
                         bool strict);

// Every agent matrix and sector bound replaced by its kron(., I_n) lift.
DistributedAlgorithm lift_algorithm(const DistributedAlgorithm& alg, int n);

// Maps a witness of the base program onto the lifted program's variables
// (P -> kron(P, I_n) and so on); alphas carry over unchanged.
std::vector<double> lift_assignment(const LmiProgram& base,
                                    const LmiProgram& lifted,
                                    const std::vector<double>& x, int n);

}  // namespace netcon
