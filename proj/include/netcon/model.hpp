#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netcon/matrix.hpp"

namespace netcon {

// One agent of the interconnection:
//   x+ = A x + B u + G w
//   y  = C_con x + D_con u + H_con w   (coupling output, u = M y stacked)
//   z  = C_opt x + D_opt u + H_opt w   (oracle input, w = phi(z))
struct AgentDynamics {
  Matrix A, B, G;
  Matrix C_con, D_con, H_con;
  Matrix C_opt, D_opt, H_opt;
  int n_x = 0, n_u = 0, n_w = 0, p = 0, q = 0;

  // Validates every dimension pair and fills in the channel sizes.
  static AgentDynamics make(Matrix A, Matrix B, Matrix G, Matrix C_con,
                            Matrix D_con, Matrix H_con, Matrix C_opt,
                            Matrix D_opt, Matrix H_opt);
};

// Incremental quadratic constraint on an oracle: for any two executions,
// [dz; dw]^T S [dz; dw] <= 0 (< 0 when strict and the increment is nonzero).
struct SectorBound {
  SymMatrix S;
  bool strict = false;
};

using OracleFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

struct OracleSpec {
  std::vector<SectorBound> bounds;  // nonempty; shared dimension q + n_w
  OracleFn evaluator;               // optional, simulation only
};

struct Agent {
  AgentDynamics dynamics;
  OracleSpec oracle;
};

// Undirected graph, 1-based nodes, normalized (a < b) sorted unique edges.
struct Graph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;

  static Graph make(int nodes, std::vector<std::pair<int, int>> edges);
  bool connected() const;
};

enum class NetworkOrigin { Explicit, LaplacianOfGraph, AdjacencyOfGraph };

struct Network {
  Matrix M;
  NetworkOrigin origin = NetworkOrigin::Explicit;
  std::optional<Graph> graph;
};

Network network_explicit(Matrix M);
Network network_from_graph_laplacian(const Graph& g, int per_channel_dim);
Network network_from_graph_adjacency(const Graph& g, int per_channel_dim);

struct DistributedAlgorithm {
  std::vector<Agent> agents;
  Network network;

  int total_nx() const;
  int total_nu() const;
  int total_nw() const;
  int total_p() const;
  int total_q() const;
};

// Gradient-descent-with-consensus parameters: per-agent consensus step rho_i
// and gradient step eta_i, oracle class [mu, K], ambient dimension n.
struct DgdParams {
  std::vector<double> rho;
  std::vector<double> eta;
  double mu = 0.0;
  double K = 0.0;
  int n = 1;
};

// Relative perturbation applied to (mu, K) when a strict sector bound is
// requested; recorded in certificates.
inline constexpr double kStrictSectorDelta = 1e-9;

SectorBound sector_monotone(double mu, int q);
SectorBound sector_lipschitz(double K, int q);

// Weighted sum of bounds sharing one dimension. Strict iff any positively
// weighted member is strict.
SectorBound sector_combine(const std::vector<SectorBound>& bounds,
                           const std::vector<double>& weights);

// Tight sector for oracles that are both mu-strongly monotone and
// K-Lipschitz: [[2*K*mu*I, -(K+mu)*I], [-(K+mu)*I, 2*I]]. Strict applies the
// kStrictSectorDelta perturbation to mu and K first.
SectorBound sector_monotone_lipschitz(double mu, double K, int q,
                                      bool strict = false);

struct LaplacianInfo {
  Matrix L;
  double d_max = 0.0;
  double lambda_max = 0.0;
  std::vector<double> eigenvalues;  // ascending

  // Second-largest magnitude among eigenvalues of I - rho L.
  double sigma(double rho) const;
};

LaplacianInfo laplacian(const Graph& g);

// strict_sector asks for the perturbed strict oracle bound, which the
// nonexpansive (rate-one) certification path requires.
DistributedAlgorithm dgd_algorithm(const DgdParams& params, const Graph& g,
                                   std::vector<OracleFn> evaluators = {},
                                   bool strict_sector = false);

struct WellPosedness {
  bool interconnection_invertible = false;
  bool explicit_oracle_loop = false;
  double cond = 0.0;
  std::string diagnostic;

  explicit operator bool() const {
    return interconnection_invertible && explicit_oracle_loop;
  }
};

// Interconnection solvability (cond(I - Dbar_con M) < 1e12) plus the
// explicit-loop requirement D_opt = H_opt = 0 used by the simulator. The LMI
// path only needs the first part.
WellPosedness check_well_posed(const DistributedAlgorithm& alg);

// PBH detectability: every eigenvalue of A with |lambda| >= 1 - 1e-9 must
// keep [A - lambda I; C] at full column rank.
bool check_detectable(const Matrix& C, const Matrix& A);

struct FixedPointResiduals {
  double consensus = 0.0;   // max pairwise ||y_i - y_j||
  double optimality = 0.0;  // ||sum_i w_i||
};

FixedPointResiduals fixed_point_residuals(const DistributedAlgorithm& alg,
                                          const std::vector<double>& y_star,
                                          const std::vector<double>& w_star);

}  // namespace netcon
