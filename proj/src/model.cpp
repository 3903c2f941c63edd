#include "netcon/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace netcon {

namespace {

void require_shape(const Matrix& m, int r, int c, const char* name) {
  if (m.rows() != r || m.cols() != c) {
    std::ostringstream os;
    os << "agent matrix " << name << " is " << m.rows() << "x" << m.cols()
       << ", expected " << r << "x" << c;
    throw DimensionMismatch(os.str());
  }
  if (!m.all_finite())
    throw InvalidMatrix(std::string("agent matrix ") + name + " not finite");
}

void require_positive_finite(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0))
    throw InvalidParameter(std::string(name) + " must be positive and finite");
}

}  // namespace

AgentDynamics AgentDynamics::make(Matrix A, Matrix B, Matrix G, Matrix C_con,
                                  Matrix D_con, Matrix H_con, Matrix C_opt,
                                  Matrix D_opt, Matrix H_opt) {
  AgentDynamics d;
  d.n_x = A.rows();
  if (d.n_x < 1 || A.cols() != d.n_x)
    throw DimensionMismatch("agent matrix A must be square, n_x >= 1");
  d.n_u = B.cols();
  d.n_w = G.cols();
  d.p = C_con.rows();
  d.q = C_opt.rows();
  require_shape(A, d.n_x, d.n_x, "A");
  require_shape(B, d.n_x, d.n_u, "B");
  require_shape(G, d.n_x, d.n_w, "G");
  require_shape(C_con, d.p, d.n_x, "C_con");
  require_shape(D_con, d.p, d.n_u, "D_con");
  require_shape(H_con, d.p, d.n_w, "H_con");
  require_shape(C_opt, d.q, d.n_x, "C_opt");
  require_shape(D_opt, d.q, d.n_u, "D_opt");
  require_shape(H_opt, d.q, d.n_w, "H_opt");
  d.A = std::move(A);
  d.B = std::move(B);
  d.G = std::move(G);
  d.C_con = std::move(C_con);
  d.D_con = std::move(D_con);
  d.H_con = std::move(H_con);
  d.C_opt = std::move(C_opt);
  d.D_opt = std::move(D_opt);
  d.H_opt = std::move(H_opt);
  return d;
}

Graph Graph::make(int nodes, std::vector<std::pair<int, int>> edges) {
  if (nodes < 1) throw InvalidGraph("graph needs at least one node");
  for (auto& [a, b] : edges) {
    if (a < 1 || a > nodes || b < 1 || b > nodes)
      throw InvalidGraph("edge endpoint out of range");
    if (a == b) throw InvalidGraph("self-loop");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidGraph("duplicate edge");
  Graph g;
  g.nodes = nodes;
  g.edges = std::move(edges);
  return g;
}

bool Graph::connected() const {
  if (nodes <= 1) return true;
  std::vector<std::vector<int>> adj(nodes + 1);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(nodes + 1, 0);
  std::vector<int> stack{1};
  seen[1] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == nodes;
}

Network network_explicit(Matrix M) {
  Network n;
  n.M = std::move(M);
  n.origin = NetworkOrigin::Explicit;
  return n;
}

Network network_from_graph_laplacian(const Graph& g, int per_channel_dim) {
  if (per_channel_dim < 1) throw InvalidParameter("channel dim must be >= 1");
  Network n;
  n.M = kron(laplacian(g).L, Matrix::identity(per_channel_dim));
  n.origin = NetworkOrigin::LaplacianOfGraph;
  n.graph = g;
  return n;
}

Network network_from_graph_adjacency(const Graph& g, int per_channel_dim) {
  if (per_channel_dim < 1) throw InvalidParameter("channel dim must be >= 1");
  Matrix adj(g.nodes, g.nodes);
  for (auto [a, b] : g.edges) adj(a - 1, b - 1) = adj(b - 1, a - 1) = 1.0;
  Network n;
  n.M = kron(adj, Matrix::identity(per_channel_dim));
  n.origin = NetworkOrigin::AdjacencyOfGraph;
  n.graph = g;
  return n;
}

int DistributedAlgorithm::total_nx() const {
  int s = 0;
  for (const auto& a : agents) s += a.dynamics.n_x;
  return s;
}
int DistributedAlgorithm::total_nu() const {
  int s = 0;
  for (const auto& a : agents) s += a.dynamics.n_u;
  return s;
}
int DistributedAlgorithm::total_nw() const {
  int s = 0;
  for (const auto& a : agents) s += a.dynamics.n_w;
  return s;
}
int DistributedAlgorithm::total_p() const {
  int s = 0;
  for (const auto& a : agents) s += a.dynamics.p;
  return s;
}
int DistributedAlgorithm::total_q() const {
  int s = 0;
  for (const auto& a : agents) s += a.dynamics.q;
  return s;
}

SectorBound sector_monotone(double mu, int q) {
  if (!(std::isfinite(mu) && mu > 0.0))
    throw InvalidParameter("monotone sector: mu must be positive");
  if (q < 1) throw InvalidParameter("sector: dimension must be >= 1");
  SymMatrix S(2 * q);
  for (int i = 0; i < q; ++i) {
    S.set(i, i, 2.0 * mu);
    S.set(i, q + i, -1.0);
  }
  return {S, false};
}

SectorBound sector_lipschitz(double K, int q) {
  if (!(std::isfinite(K) && K > 0.0))
    throw InvalidParameter("lipschitz sector: K must be positive");
  if (q < 1) throw InvalidParameter("sector: dimension must be >= 1");
  SymMatrix S(2 * q);
  for (int i = 0; i < q; ++i) {
    S.set(i, i, -K * K);
    S.set(q + i, q + i, 1.0);
  }
  return {S, false};
}

SectorBound sector_combine(const std::vector<SectorBound>& bounds,
                           const std::vector<double>& weights) {
  if (bounds.empty()) throw EmptyInput("sector_combine: no bounds");
  if (weights.size() != bounds.size())
    throw InvalidParameter("sector_combine: one weight per bound");
  int dim = bounds.front().S.dim();
  double total = 0.0;
  for (double w : weights) {
    if (!(std::isfinite(w) && w >= 0.0))
      throw InvalidParameter("sector_combine: weights must be >= 0");
    total += w;
  }
  if (total == 0.0)
    throw InvalidParameter("sector_combine: weights must not all be zero");
  SectorBound out{SymMatrix(dim), false};
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i].S.dim() != dim)
      throw DimensionMismatch("sector_combine: bound dims differ");
    out.S += weights[i] * bounds[i].S;
    if (weights[i] > 0.0 && bounds[i].strict) out.strict = true;
  }
  return out;
}

SectorBound sector_monotone_lipschitz(double mu, double K, int q,
                                      bool strict) {
  require_positive_finite(mu, "mu");
  require_positive_finite(K, "K");
  if (mu > K) throw InvalidParameter("sector: mu must not exceed K");
  if (q < 1) throw InvalidParameter("sector: dimension must be >= 1");
  if (strict) {
    // Nonzero increments then satisfy the bound strictly; the perturbation
    // size is recorded in certificates.
    mu *= 1.0 - kStrictSectorDelta;
    K *= 1.0 + kStrictSectorDelta;
  }
  SymMatrix S(2 * q);
  for (int i = 0; i < q; ++i) {
    S.set(i, i, 2.0 * K * mu);
    S.set(i, q + i, -(K + mu));
    S.set(q + i, q + i, 2.0);
  }
  return {S, strict};
}

LaplacianInfo laplacian(const Graph& g) {
  LaplacianInfo info;
  Matrix L(g.nodes, g.nodes);
  for (auto [a, b] : g.edges) {
    L(a - 1, b - 1) = L(b - 1, a - 1) = -1.0;
    L(a - 1, a - 1) += 1.0;
    L(b - 1, b - 1) += 1.0;
  }
  info.d_max = 0.0;
  for (int i = 0; i < g.nodes; ++i) info.d_max = std::max(info.d_max, L(i, i));
  info.eigenvalues = sym_eigenvalues(SymMatrix::symmetrized(L));
  info.lambda_max = info.eigenvalues.back();
  info.L = std::move(L);
  return info;
}

double LaplacianInfo::sigma(double rho) const {
  std::vector<double> mags;
  mags.reserve(eigenvalues.size());
  for (double l : eigenvalues) mags.push_back(std::abs(1.0 - rho * l));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  return mags.size() > 1 ? mags[1] : mags.front();
}

DistributedAlgorithm dgd_algorithm(const DgdParams& params, const Graph& g,
                                   std::vector<OracleFn> evaluators,
                                   bool strict_sector) {
  int N = g.nodes;
  if (N < 2) throw InvalidParameter("dgd: need at least two agents");
  if (int(params.rho.size()) != N || int(params.eta.size()) != N)
    throw DimensionMismatch("dgd: one rho and eta per node");
  for (double r : params.rho) require_positive_finite(r, "rho");
  for (double e : params.eta) require_positive_finite(e, "eta");
  require_positive_finite(params.mu, "mu");
  require_positive_finite(params.K, "K");
  if (params.mu > params.K) throw InvalidParameter("dgd: mu must not exceed K");
  if (params.n < 1) throw InvalidParameter("dgd: ambient dimension >= 1");
  if (!evaluators.empty() && int(evaluators.size()) != N)
    throw InvalidParameter("dgd: one evaluator per node when provided");
  if (!g.connected()) throw DisconnectedGraph("dgd: graph must be connected");

  DistributedAlgorithm alg;
  int n = params.n;
  Matrix I = Matrix::identity(n);
  Matrix Z(n, n);
  for (int i = 0; i < N; ++i) {
    Agent a;
    a.dynamics = AgentDynamics::make(I, -params.rho[i] * I,
                                     -params.eta[i] * I, I, Z, Z, I, Z, Z);
    a.oracle.bounds = {
        sector_monotone_lipschitz(params.mu, params.K, n, strict_sector)};
    if (!evaluators.empty()) a.oracle.evaluator = std::move(evaluators[i]);
    alg.agents.push_back(std::move(a));
  }
  alg.network = network_from_graph_laplacian(g, n);
  return alg;
}

WellPosedness check_well_posed(const DistributedAlgorithm& alg) {
  WellPosedness wp;
  if (alg.agents.empty()) {
    wp.diagnostic = "no agents";
    return wp;
  }
  if (alg.network.M.cols() != alg.total_p() ||
      alg.network.M.rows() != alg.total_nu()) {
    wp.diagnostic = "coupling matrix shape does not match stacked channels";
    return wp;
  }

  std::vector<Matrix> dblocks;
  for (const auto& a : alg.agents) dblocks.push_back(a.dynamics.D_con);
  Matrix dbar = block_diag(dblocks);
  Matrix T = Matrix::identity(dbar.rows()) - dbar * alg.network.M;
  wp.cond = condition_number(T);
  wp.interconnection_invertible = std::isfinite(wp.cond) && wp.cond < 1e12;

  wp.explicit_oracle_loop = true;
  for (const auto& a : alg.agents)
    if (a.dynamics.D_opt.max_abs() != 0.0 || a.dynamics.H_opt.max_abs() != 0.0)
      wp.explicit_oracle_loop = false;

  if (!wp.interconnection_invertible)
    wp.diagnostic = "I - D_con M is numerically singular";
  else if (!wp.explicit_oracle_loop)
    wp.diagnostic =
        "oracle input depends on u or w (D_opt or H_opt nonzero); LMI "
        "certification still applies, simulation does not";
  return wp;
}

bool check_detectable(const Matrix& C, const Matrix& A) {
  if (A.rows() != A.cols()) throw DimensionMismatch("detectability: A square");
  if (C.cols() != A.rows())
    throw DimensionMismatch("detectability: C cols must match A");
  int n = A.rows();
  const double tol_stab = 1e-9;
  double rank_tol = 1e-9 * std::max(1.0, A.fro_norm());
  auto eigs = general_eigenvalues(A);
  for (const auto& lam : eigs) {
    if (std::abs(lam) < 1.0 - tol_stab) continue;
    if (std::abs(lam.imag()) <= 1e-12 * std::max(1.0, std::abs(lam))) {
      Matrix m(n + C.rows(), n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m(i, j) = A(i, j) - (i == j ? lam.real() : 0.0);
      for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < n; ++j) m(n + i, j) = C(i, j);
      if (numeric_rank(m, rank_tol) < n) return false;
    } else {
      // Complex eigenvalue: test the realified pencil, whose real rank is
      // twice the complex rank.
      int rows = n + C.rows();
      Matrix m(2 * rows, 2 * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double re = A(i, j) - (i == j ? lam.real() : 0.0);
          double im = (i == j ? -lam.imag() : 0.0);
          m(i, j) = re;
          m(i, n + j) = -im;
          m(rows + i, j) = im;
          m(rows + i, n + j) = re;
        }
      for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < n; ++j) {
          m(n + i, j) = C(i, j);
          m(rows + n + i, n + j) = C(i, j);
        }
      if (numeric_rank(m, rank_tol) < 2 * n) return false;
    }
  }
  return true;
}

FixedPointResiduals fixed_point_residuals(const DistributedAlgorithm& alg,
                                          const std::vector<double>& y_star,
                                          const std::vector<double>& w_star) {
  int N = int(alg.agents.size());
  if (N == 0) throw EmptyInput("fixed_point_residuals: no agents");
  int p0 = alg.agents.front().dynamics.p;
  int w0 = alg.agents.front().dynamics.n_w;
  for (const auto& a : alg.agents)
    if (a.dynamics.p != p0 || a.dynamics.n_w != w0)
      throw DimensionMismatch(
          "fixed_point_residuals: agents must share channel dims");
  if (int(y_star.size()) != N * p0 || int(w_star.size()) != N * w0)
    throw DimensionMismatch("fixed_point_residuals: stacked lengths");

  FixedPointResiduals r;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double d = 0.0;
      for (int k = 0; k < p0; ++k) {
        double diff = y_star[i * p0 + k] - y_star[j * p0 + k];
        d += diff * diff;
      }
      r.consensus = std::max(r.consensus, std::sqrt(d));
    }
  double s = 0.0;
  for (int k = 0; k < w0; ++k) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += w_star[i * w0 + k];
    s += acc * acc;
  }
  r.optimality = std::sqrt(s);
  return r;
}

}  // namespace netcon
