#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "netcon/certify.hpp"

namespace netcon {

// f(x) = a (x - b)^2 elementwise, gradient slope 2a.
struct QuadraticCost {
  double a = 1.0;
  double b = 0.0;
};

// Gradient oracles for one cost per agent; every slope 2a must lie inside
// [mu, K] so the oracles actually satisfy the sector bounds they are paired
// with.
std::vector<OracleFn> quadratic_gradients(const std::vector<QuadraticCost>& costs,
                                          double mu, double K);

struct Trajectory {
  std::vector<std::vector<double>> states;  // horizon + 1 stacked vectors
  int horizon = 0;
};

// Closed-loop simulator. Stacks the agent matrices once, factors the output
// loop I - D_con M, and then advances states: z = C_opt x, w = phi(z),
// y = (I - D_con M)^{-1}(C_con x + H_con w), u = M y, x+ = A x + B u + G w.
// Demands D_opt = 0 and H_opt = 0 (the oracle input may not depend on the
// same step's coupling) and an evaluator wherever n_w > 0.
class Simulator {
 public:
  explicit Simulator(const DistributedAlgorithm& alg);

  std::vector<double> step(const std::vector<double>& x) const;
  Trajectory run(std::vector<double> x0, int horizon) const;

  int state_dim() const { return n_; }

 private:
  const DistributedAlgorithm& alg_;
  int n_ = 0;
  Matrix a_, b_, g_, c_con_, h_con_, c_opt_, m_;
  std::optional<LuFactors> loop_;  // I - D_con M
  std::vector<std::pair<int, int>> z_spans_;  // per agent (offset, q)
};

std::vector<double> step(const DistributedAlgorithm& alg,
                         const std::vector<double>& x);

// Fixed point of the affine closed loop: probes x+ = X x + c through the
// simulator, checks affinity on a random direction, and solves
// (I - X) x* = c. Throws NoUniqueFixedPoint when I - X is singular (e.g.
// eta = 0 leaves every consensus vector fixed) and ModelError when the loop
// is not affine.
std::vector<double> fixed_point_affine(const DistributedAlgorithm& alg);

struct RunEnsemble {
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> error_curves;  // runs x (horizon + 1)
  std::vector<double> mean_log_error;             // horizon + 1
};

// Errors e(k) = ||x(k) - x_ref||_2 over uniformly drawn initial states; run r
// draws from stream r of the seed, so results are independent of worker
// count. log10 of an exact zero clamps at -16. Without an explicit reference
// the affine fixed point is used.
RunEnsemble error_ensemble(const DistributedAlgorithm& alg, int runs,
                           int horizon, std::pair<double, double> init_box,
                           std::uint64_t seed,
                           const std::optional<std::vector<double>>& reference =
                               std::nullopt);

struct ContractionEstimate {
  double rate_estimate = 0.0;  // max over pairs and steps of the V ratio
  std::vector<double> per_step_ratios;  // max over pairs, per step
};

// Simulates random trajectory pairs and measures V(dx(k+1)) / V(dx(k)) where
// V is the certificate's block-diagonal P quadratic form (Euclidean when no
// certificate is given). Zero increments are skipped.
ContractionEstimate empirical_contraction(const DistributedAlgorithm& alg,
                                          int pairs, int horizon,
                                          std::uint64_t seed,
                                          const Certificate* cert = nullptr,
                                          double init_half_width = 10.0);

// Block-diagonal storage matrix assembled from a witness's P variables.
SymMatrix storage_matrix(const DistributedAlgorithm& alg, const Assignment& witness);

}  // namespace netcon
