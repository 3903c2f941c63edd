#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netcon/sdp.hpp"

namespace netcon {

enum class CertificateMode { Exponential, Sublinear };

// A verified convergence certificate: the witness has been re-checked
// against every constraint of the generating program before this object
// exists. fingerprint ties it to the exact model it certifies.
struct Certificate {
  CertificateMode mode = CertificateMode::Sublinear;
  double gamma = 1.0;  // contraction rate, meaningful in Exponential mode
  Assignment witness;
  std::vector<double> witness_x;
  std::vector<double> margins;  // per constraint, program order
  double min_margin = 0.0;
  std::uint64_t fingerprint = 0;
  double delta = 0.0;  // sector perturbation used for strict bounds
};

struct CertifyFailure {
  Feasibility solver_status = Feasibility::Undecided;
  std::string reason;
  std::vector<int> undetectable_agents;
};

struct CertifyOutcome {
  std::optional<Certificate> certificate;
  CertifyFailure failure;  // meaningful when no certificate

  explicit operator bool() const { return certificate.has_value(); }
};

// Order-independent hash of every dimension, matrix entry, sector bound and
// coupling entry; stable across runs and platforms with IEEE doubles.
std::uint64_t model_fingerprint(const DistributedAlgorithm& alg);

// Exponential contraction at the given rate (rate-gamma storage decrease plus
// neutralized coupling supply). gamma must lie in (0, 1).
CertifyOutcome certify_exponential(const DistributedAlgorithm& alg, double gamma,
                                   const SolveOptions& opts = {});

// Rate-one path: every (C_opt, A) pair must be detectable, every oracle needs
// a strict sector bound, and the interconnection inequality is required
// strictly. Together these certify trajectory convergence without a rate.
CertifyOutcome certify_sublinear(const DistributedAlgorithm& alg,
                                 const SolveOptions& opts = {});

struct ClassicalCheck {
  bool ok = false;
  double rho_bound = 0.0;  // rho must stay below 1/d_max
  double eta_bound = 0.0;  // eta must stay below (2 - rho*lambda_max)/K
};

// Textbook step-size conditions for consensus-gradient descent. Only defined
// for homogeneous steps; heterogeneous input throws NotApplicable.
ClassicalCheck classical_dgd_check(const DgdParams& params, const Graph& g);

struct GridAxis {
  std::string param;  // "rho", "eta" (all agents) or "rho<k>", "eta<k>" (1-based)
  std::vector<double> values;  // strictly increasing
};

// Default sweep ranges: 0.001 step 0.05 up to 1.501 (rho) / 2.001 (eta).
GridAxis default_rho_axis();
GridAxis default_eta_axis();

enum class GridMode { Sublinear, SublinearAndBisect };

struct GridCell {
  bool classical_ok = false;
  bool certified_sublinear = false;
  std::optional<double> gamma_star;  // filled in SublinearAndBisect mode
  double margin = 0.0;
  std::string note;  // skip/error reason, empty when the cell ran clean
};

struct GridReport {
  std::vector<GridAxis> axes;
  // Row-major over axes: with two axes, index = i0 * axes[1].size() + i1.
  std::vector<GridCell> cells;
  GridMode mode = GridMode::Sublinear;

  const GridCell& at(const std::vector<std::size_t>& idx) const;
};

// Sweeps the axes over a consensus-gradient family: per cell, classical
// check, a cheap sampled spectral necessary condition, then sublinear
// certification (and rate bisection in SublinearAndBisect mode). Cells are
// independent; NETCON_WORKERS > 1 evaluates them on a thread pool with a
// deterministic merge by cell index. Per-cell errors are recorded in the
// cell note, never thrown.
GridReport grid_search(const DgdParams& base, const Graph& g,
                       const std::vector<GridAxis>& axes, GridMode mode,
                       const SolveOptions& opts = {});

// Closed-form rate-one witness for scalar consensus-gradient cells
// (P=1, alpha=eta/(K+mu), S=-rho, Q=-alpha*K*mu, R from the eta^2 leak),
// aligned with prog.variables. Exact for homogeneous cells with
// eta*(K+mu) < 2; still a useful warm start elsewhere.
std::vector<double> dgd_rate_one_hint(const LmiProgram& prog,
                                      const DgdParams& params);

// Sampled necessary condition for any rate-one certificate: for diagonal
// sector slopes, the affine increment map I - diag(rho)L - diag(eta)Lambda
// must have spectral radius <= 1. Returns the largest sampled radius.
double sampled_increment_radius(const DgdParams& params, const Graph& g,
                                int samples = 16, std::uint64_t seed = 0);

}  // namespace netcon
