#include "netcon/lmi.hpp"

#include <cmath>
#include <sstream>

namespace netcon {

namespace {

SymMatrix unit_sym(int dim, int a, int b) {
  SymMatrix e(dim);
  e.set(a, b, 1.0);
  return e;
}

void check_gamma(double gamma) {
  if (!(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0))
    throw InvalidParameter("gamma must lie in (0, 1]");
}

}  // namespace

std::string to_string(const VarId& v) {
  static const char* names[] = {"P", "alpha", "Q", "S", "R"};
  std::ostringstream os;
  os << names[int(v.kind)] << "(" << v.agent;
  if (v.kind == VarKind::Alpha)
    os << "," << v.a;
  else
    os << "," << v.a << "," << v.b;
  os << ")";
  return os.str();
}

int LmiProgram::var_position(const VarId& v) const {
  auto it = index.find(v);
  if (it == index.end())
    throw SolverError("variable " + to_string(v) + " not in program");
  return it->second;
}

SymMatrix eval_lmi(const AffineLmi& lmi, const LmiProgram& prog,
                   const std::vector<double>& x) {
  if (x.size() != prog.variables.size())
    throw DimensionMismatch("eval_lmi: assignment length");
  SymMatrix out = lmi.constant;
  for (const auto& [var, coeff] : lmi.terms) {
    double v = x[prog.var_position(var)];
    if (v != 0.0) out += v * coeff;
  }
  return out;
}

AffineLmi normalized_geq(const AffineLmi& lmi) {
  if (lmi.sense == Sense::Psd || lmi.sense == Sense::Pd) return lmi;
  AffineLmi out;
  out.dim = lmi.dim;
  out.constant = -1.0 * lmi.constant;
  for (const auto& [var, coeff] : lmi.terms)
    out.terms.emplace(var, -1.0 * coeff);
  out.sense = lmi.sense == Sense::Nsd ? Sense::Psd : Sense::Pd;
  return out;
}

AffineLmi local_dissipativity_lmi(const AgentDynamics& d,
                                  const std::vector<SectorBound>& bounds,
                                  double gamma, int agent_index) {
  check_gamma(gamma);
  if (bounds.empty()) throw EmptyInput("local lmi: no sector bounds");

  int nv = d.n_x + d.n_u + d.n_w;
  AffineLmi lmi;
  lmi.dim = nv;
  lmi.constant = SymMatrix(nv);
  lmi.sense = Sense::Psd;

  // Stacked selectors on (dx, du, dw).
  Matrix F(d.n_x, nv);  // [A B G] -> dx+
  Matrix J(d.n_x, nv);  // [I 0 0] -> dx
  for (int i = 0; i < d.n_x; ++i) {
    J(i, i) = 1.0;
    for (int j = 0; j < d.n_x; ++j) F(i, j) = d.A(i, j);
    for (int j = 0; j < d.n_u; ++j) F(i, d.n_x + j) = d.B(i, j);
    for (int j = 0; j < d.n_w; ++j) F(i, d.n_x + d.n_u + j) = d.G(i, j);
  }
  Matrix K(d.q + d.n_w, nv);  // [C_opt D_opt H_opt; 0 0 I] -> (dz, dw)
  for (int i = 0; i < d.q; ++i) {
    for (int j = 0; j < d.n_x; ++j) K(i, j) = d.C_opt(i, j);
    for (int j = 0; j < d.n_u; ++j) K(i, d.n_x + j) = d.D_opt(i, j);
    for (int j = 0; j < d.n_w; ++j) K(i, d.n_x + d.n_u + j) = d.H_opt(i, j);
  }
  for (int i = 0; i < d.n_w; ++i) K(d.q + i, d.n_x + d.n_u + i) = 1.0;
  Matrix L(d.p + d.n_u, nv);  // [C_con D_con H_con; 0 I 0] -> (dy, du)
  for (int i = 0; i < d.p; ++i) {
    for (int j = 0; j < d.n_x; ++j) L(i, j) = d.C_con(i, j);
    for (int j = 0; j < d.n_u; ++j) L(i, d.n_x + j) = d.D_con(i, j);
    for (int j = 0; j < d.n_w; ++j) L(i, d.n_x + d.n_u + j) = d.H_con(i, j);
  }
  for (int i = 0; i < d.n_u; ++i) L(d.p + i, d.n_x + i) = 1.0;

  for (int i = 0; i < d.n_x; ++i)
    for (int j = i; j < d.n_x; ++j) {
      SymMatrix e = unit_sym(d.n_x, i, j);
      SymMatrix coeff = gamma * congruence(J, e);
      coeff += -1.0 * congruence(F, e);
      lmi.terms.emplace(VarId{VarKind::P, agent_index, i, j}, coeff);
    }

  for (int bi = 0; bi < int(bounds.size()); ++bi) {
    if (bounds[bi].S.dim() != d.q + d.n_w)
      throw DimensionMismatch("local lmi: sector bound dim vs (z, w) stack");
    lmi.terms.emplace(VarId{VarKind::Alpha, agent_index, bi, 0},
                      congruence(K, bounds[bi].S));
  }

  int pu = d.p + d.n_u;
  for (int i = 0; i < d.p; ++i)
    for (int j = i; j < d.p; ++j)
      lmi.terms.emplace(VarId{VarKind::Q, agent_index, i, j},
                        congruence(L, unit_sym(pu, i, j)));
  for (int a = 0; a < d.p; ++a)
    for (int b = 0; b < d.n_u; ++b)
      lmi.terms.emplace(VarId{VarKind::S, agent_index, a, b},
                        congruence(L, unit_sym(pu, a, d.p + b)));
  for (int i = 0; i < d.n_u; ++i)
    for (int j = i; j < d.n_u; ++j)
      lmi.terms.emplace(VarId{VarKind::R, agent_index, i, j},
                        congruence(L, unit_sym(pu, d.p + i, d.p + j)));
  return lmi;
}

AffineLmi interconnection_lmi(const DistributedAlgorithm& alg, bool strict) {
  const Matrix& M = alg.network.M;
  int tp = alg.total_p(), tu = alg.total_nu();
  if (M.rows() != tu || M.cols() != tp)
    throw DimensionMismatch("interconnection lmi: M vs stacked channels");

  AffineLmi lmi;
  lmi.dim = tp;
  lmi.constant = SymMatrix(tp);
  lmi.sense = strict ? Sense::Nd : Sense::Nsd;

  int po = 0, uo = 0;
  for (int ai = 0; ai < int(alg.agents.size()); ++ai) {
    const auto& d = alg.agents[ai].dynamics;
    for (int i = 0; i < d.p; ++i)
      for (int j = i; j < d.p; ++j)
        lmi.terms.emplace(VarId{VarKind::Q, ai, i, j},
                          unit_sym(tp, po + i, po + j));
    // S block enters through S M + (S M)^T: placing a 1 at (po+a, uo+b) of
    // the stacked S adds row uo+b of M into row po+a.
    for (int a = 0; a < d.p; ++a)
      for (int b = 0; b < d.n_u; ++b) {
        Matrix t(tp, tp);
        for (int c = 0; c < tp; ++c) t(po + a, c) = M(uo + b, c);
        lmi.terms.emplace(VarId{VarKind::S, ai, a, b},
                          SymMatrix::symmetrized(t + t.transposed()));
      }
    for (int i = 0; i < d.n_u; ++i)
      for (int j = i; j < d.n_u; ++j)
        lmi.terms.emplace(VarId{VarKind::R, ai, i, j},
                          congruence(M, unit_sym(tu, uo + i, uo + j)));
    po += d.p;
    uo += d.n_u;
  }
  return lmi;
}

LmiProgram build_program(const DistributedAlgorithm& alg, double gamma,
                         bool strict) {
  check_gamma(gamma);
  if (alg.agents.empty()) throw EmptyInput("build_program: no agents");
  if (strict && gamma != 1.0)
    throw InvalidParameter("strict (nonexpansive) path requires gamma == 1");
  auto wp = check_well_posed(alg);
  if (!wp.interconnection_invertible)
    throw ModelError("build_program: " + wp.diagnostic);

  LmiProgram prog;
  prog.gamma = gamma;

  for (int ai = 0; ai < int(alg.agents.size()); ++ai) {
    const auto& d = alg.agents[ai].dynamics;
    const auto& bounds = alg.agents[ai].oracle.bounds;
    if (bounds.empty()) throw EmptyInput("build_program: agent without bounds");
    for (int i = 0; i < d.n_x; ++i)
      for (int j = i; j < d.n_x; ++j)
        prog.variables.push_back({VarKind::P, ai, i, j});
    for (int bi = 0; bi < int(bounds.size()); ++bi) {
      prog.nonneg.push_back(int(prog.variables.size()));
      prog.variables.push_back({VarKind::Alpha, ai, bi, 0});
    }
    for (int i = 0; i < d.p; ++i)
      for (int j = i; j < d.p; ++j)
        prog.variables.push_back({VarKind::Q, ai, i, j});
    for (int a = 0; a < d.p; ++a)
      for (int b = 0; b < d.n_u; ++b)
        prog.variables.push_back({VarKind::S, ai, a, b});
    for (int i = 0; i < d.n_u; ++i)
      for (int j = i; j < d.n_u; ++j)
        prog.variables.push_back({VarKind::R, ai, i, j});
  }
  for (int k = 0; k < int(prog.variables.size()); ++k)
    prog.index[prog.variables[k]] = k;

  for (int ai = 0; ai < int(alg.agents.size()); ++ai)
    prog.constraints.push_back(local_dissipativity_lmi(
        alg.agents[ai].dynamics, alg.agents[ai].oracle.bounds, gamma, ai));
  prog.constraints.push_back(interconnection_lmi(alg, strict));
  for (int ai = 0; ai < int(alg.agents.size()); ++ai) {
    const auto& d = alg.agents[ai].dynamics;
    AffineLmi pd;
    pd.dim = d.n_x;
    pd.constant = SymMatrix(d.n_x);
    pd.sense = Sense::Pd;
    for (int i = 0; i < d.n_x; ++i)
      for (int j = i; j < d.n_x; ++j)
        pd.terms.emplace(VarId{VarKind::P, ai, i, j},
                         unit_sym(d.n_x, i, j));
    prog.constraints.push_back(std::move(pd));
  }
  return prog;
}

namespace {

Matrix lift(const Matrix& m, int n) {
  return kron(m, Matrix::identity(n));
}

SymMatrix lift_sector_matrix(const SymMatrix& s, int q, int nw, int n) {
  // Blockwise lift: each of the four (z, w) blocks gets kron(., I_n), which
  // is not the same as lifting the stacked matrix wholesale.
  Matrix out(n * (q + nw), n * (q + nw));
  auto place = [&](int ro, int co, int br, int bc, int rdim, int cdim) {
    for (int i = 0; i < rdim; ++i)
      for (int j = 0; j < cdim; ++j) {
        double v = s(br + i, bc + j);
        if (v == 0.0) continue;
        for (int k = 0; k < n; ++k) out(ro + i * n + k, co + j * n + k) = v;
      }
  };
  place(0, 0, 0, 0, q, q);
  place(0, n * q, 0, q, q, nw);
  place(n * q, 0, q, 0, nw, q);
  place(n * q, n * q, q, q, nw, nw);
  return SymMatrix::symmetrized(out);
}

}  // namespace

DistributedAlgorithm lift_algorithm(const DistributedAlgorithm& alg, int n) {
  if (n < 1) throw InvalidParameter("lift: n must be >= 1");
  DistributedAlgorithm out;
  for (const auto& agent : alg.agents) {
    const auto& d = agent.dynamics;
    Agent a;
    a.dynamics = AgentDynamics::make(
        lift(d.A, n), lift(d.B, n), lift(d.G, n), lift(d.C_con, n),
        lift(d.D_con, n), lift(d.H_con, n), lift(d.C_opt, n),
        lift(d.D_opt, n), lift(d.H_opt, n));
    for (const auto& b : agent.oracle.bounds)
      a.oracle.bounds.push_back(
          {lift_sector_matrix(b.S, d.q, d.n_w, n), b.strict});
    out.agents.push_back(std::move(a));
  }
  out.network = network_explicit(lift(alg.network.M, n));
  return out;
}

std::vector<double> lift_assignment(const LmiProgram& base,
                                    const LmiProgram& lifted,
                                    const std::vector<double>& x, int n) {
  if (x.size() != base.variables.size())
    throw DimensionMismatch("lift_assignment: witness length");
  std::vector<double> out(lifted.variables.size(), 0.0);
  for (std::size_t k = 0; k < lifted.variables.size(); ++k) {
    const VarId& v = lifted.variables[k];
    if (v.kind == VarKind::Alpha) {
      out[k] = x[base.var_position(v)];
      continue;
    }
    // Entry (a, b) of kron(X, I_n) is X(a/n, b/n) when a%n == b%n, else 0.
    if (v.a % n != v.b % n) continue;
    VarId bv{v.kind, v.agent, v.a / n, v.b / n};
    out[k] = x[base.var_position(bv)];
  }
  return out;
}

}  // namespace netcon
