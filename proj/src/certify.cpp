#include "netcon/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "netcon/rng.hpp"

namespace netcon {

namespace {

void hash_u64(std::uint64_t& h, std::uint64_t v) {
  // FNV-1a over the eight bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
}

void hash_double(std::uint64_t& h, double d) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &d, sizeof bits);
  hash_u64(h, bits);
}

void hash_matrix(std::uint64_t& h, const Matrix& m) {
  hash_u64(h, std::uint64_t(m.rows()));
  hash_u64(h, std::uint64_t(m.cols()));
  for (double d : m.data()) hash_double(h, d);
}

Certificate make_certificate(CertificateMode mode, double gamma,
                             const LmiProgram& prog,
                             const FeasibilityResult& res,
                             const DistributedAlgorithm& alg,
                             double box_bound) {
  WitnessCheck check = verify_witness(prog, res.witness_x, kEpsPost, box_bound);
  if (!check.ok) throw SolverError("certificate witness failed re-verification");
  Certificate cert;
  cert.mode = mode;
  cert.gamma = gamma;
  cert.witness = *res.witness;
  cert.witness_x = res.witness_x;
  cert.margins = check.constraint_margins;
  cert.min_margin = check.min_margin;
  cert.fingerprint = model_fingerprint(alg);
  for (const Agent& agent : alg.agents)
    for (const SectorBound& b : agent.oracle.bounds)
      if (b.strict) cert.delta = kStrictSectorDelta;
  return cert;
}

void require_well_posed(const DistributedAlgorithm& alg) {
  WellPosedness wp = check_well_posed(alg);
  if (!wp) throw ModelError("model is not well posed: " + wp.diagnostic);
}

struct AxisTarget {
  bool rho = false;  // else eta
  int agent = -1;    // -1: all agents
};

AxisTarget parse_axis(const std::string& param, int n_agents) {
  AxisTarget t;
  std::string base;
  if (param.rfind("rho", 0) == 0) {
    t.rho = true;
    base = param.substr(3);
  } else if (param.rfind("eta", 0) == 0) {
    t.rho = false;
    base = param.substr(3);
  } else {
    throw InvalidParameter("unknown grid axis '" + param + "'");
  }
  if (!base.empty()) {
    int k = 0;
    try {
      k = std::stoi(base);
    } catch (const std::exception&) {
      throw InvalidParameter("unknown grid axis '" + param + "'");
    }
    if (k < 1 || k > n_agents)
      throw InvalidParameter("grid axis '" + param + "' is out of range");
    t.agent = k - 1;
  }
  return t;
}

void apply_axis(DgdParams& p, const AxisTarget& t, double value) {
  std::vector<double>& v = t.rho ? p.rho : p.eta;
  if (t.agent < 0) {
    std::fill(v.begin(), v.end(), value);
  } else {
    v[std::size_t(t.agent)] = value;
  }
}

bool homogeneous_steps(const DgdParams& p) {
  auto all_equal = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  return !p.rho.empty() && !p.eta.empty() && all_equal(p.rho) && all_equal(p.eta);
}

int worker_count() {
  const char* env = std::getenv("NETCON_WORKERS");
  if (!env) return 1;
  int n = std::atoi(env);
  return std::max(1, std::min(n, 64));
}

}  // namespace

std::uint64_t model_fingerprint(const DistributedAlgorithm& alg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  hash_u64(h, std::uint64_t(alg.agents.size()));
  for (const Agent& agent : alg.agents) {
    const AgentDynamics& d = agent.dynamics;
    for (const Matrix* m : {&d.A, &d.B, &d.G, &d.C_con, &d.D_con, &d.H_con,
                            &d.C_opt, &d.D_opt, &d.H_opt})
      hash_matrix(h, *m);
    hash_u64(h, std::uint64_t(agent.oracle.bounds.size()));
    for (const SectorBound& b : agent.oracle.bounds) {
      hash_matrix(h, b.S.full());
      hash_u64(h, b.strict ? 1 : 0);
    }
  }
  hash_matrix(h, alg.network.M);
  return h;
}

CertifyOutcome certify_exponential(const DistributedAlgorithm& alg, double gamma,
                                   const SolveOptions& opts) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw InvalidParameter("exponential certification needs gamma in (0,1)");
  require_well_posed(alg);

  LmiProgram prog = build_program(alg, gamma, false);
  FeasibilityResult res = solve_feasibility(prog, opts);
  CertifyOutcome out;
  if (res.status == Feasibility::Feasible) {
    out.certificate = make_certificate(CertificateMode::Exponential, gamma, prog,
                                       res, alg, opts.box_bound);
  } else {
    out.failure.solver_status = res.status;
    out.failure.reason = "rate-" + std::to_string(gamma) +
                         " program " + to_string(res.status);
  }
  return out;
}

CertifyOutcome certify_sublinear(const DistributedAlgorithm& alg,
                                 const SolveOptions& opts) {
  require_well_posed(alg);
  CertifyOutcome out;

  for (std::size_t i = 0; i < alg.agents.size(); ++i) {
    const AgentDynamics& d = alg.agents[i].dynamics;
    if (!check_detectable(d.C_opt, d.A))
      out.failure.undetectable_agents.push_back(int(i));
  }
  if (!out.failure.undetectable_agents.empty()) {
    out.failure.reason = "undetectable (C_opt, A) pair";
    return out;
  }
  for (std::size_t i = 0; i < alg.agents.size(); ++i) {
    const auto& bounds = alg.agents[i].oracle.bounds;
    if (std::none_of(bounds.begin(), bounds.end(),
                     [](const SectorBound& b) { return b.strict; })) {
      out.failure.reason =
          "agent " + std::to_string(i) + " has no strict sector bound";
      return out;
    }
  }

  LmiProgram prog = build_program(alg, 1.0, true);
  FeasibilityResult res = solve_feasibility(prog, opts);
  if (res.status == Feasibility::Feasible) {
    out.certificate = make_certificate(CertificateMode::Sublinear, 1.0, prog,
                                       res, alg, opts.box_bound);
  } else {
    out.failure.solver_status = res.status;
    out.failure.reason = "rate-one strict program " + to_string(res.status);
  }
  return out;
}

ClassicalCheck classical_dgd_check(const DgdParams& params, const Graph& g) {
  if (params.rho.empty() || params.rho.size() != params.eta.size())
    throw InvalidParameter("step-size vectors are empty or mismatched");
  if (!homogeneous_steps(params))
    throw NotApplicable("classical step-size rules need homogeneous steps");
  if (!(params.K > 0.0)) throw InvalidParameter("K must be positive");

  LaplacianInfo info = laplacian(g);
  double rho = params.rho.front(), eta = params.eta.front();
  ClassicalCheck check;
  check.rho_bound = 1.0 / info.d_max;
  check.eta_bound = (2.0 - rho * info.lambda_max) / params.K;
  check.ok = rho < check.rho_bound && eta < check.eta_bound;
  return check;
}

GridAxis default_rho_axis() {
  GridAxis a{"rho", {}};
  for (double v = 0.001; v < 1.502; v += 0.05) a.values.push_back(v);
  return a;
}

GridAxis default_eta_axis() {
  GridAxis a{"eta", {}};
  for (double v = 0.001; v < 2.002; v += 0.05) a.values.push_back(v);
  return a;
}

const GridCell& GridReport::at(const std::vector<std::size_t>& idx) const {
  if (idx.size() != axes.size()) throw DimensionMismatch("grid index rank");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= axes[k].values.size()) throw DimensionMismatch("grid index");
    flat = flat * axes[k].values.size() + idx[k];
  }
  return cells[flat];
}

std::vector<double> dgd_rate_one_hint(const LmiProgram& prog,
                                      const DgdParams& params) {
  const double mu = params.mu, K = params.K;
  std::vector<double> x(prog.variables.size(), 0.0);
  for (std::size_t i = 0; i < prog.variables.size(); ++i) {
    const VarId& v = prog.variables[i];
    const std::size_t a = std::size_t(v.agent);
    if (a >= params.rho.size()) continue;
    const double rho = params.rho[a], eta = params.eta[a];
    const double alpha = eta / (K + mu);
    const double denom = 2.0 * alpha - eta * eta;
    switch (v.kind) {
      case VarKind::P:
        if (v.a == v.b) x[i] = 1.0;
        break;
      case VarKind::Alpha:
        x[i] = alpha;
        break;
      case VarKind::Q:
        if (v.a == v.b) x[i] = -alpha * K * mu;
        break;
      case VarKind::S:
        if (v.a == v.b) x[i] = -rho;
        break;
      case VarKind::R:
        if (v.a == v.b)
          x[i] = denom > 0.0
                     ? rho * rho + (rho * eta) * (rho * eta) / denom + 1e-9
                     : rho * rho + 1e-9;
        break;
    }
  }
  return x;
}

double sampled_increment_radius(const DgdParams& params, const Graph& g,
                                int samples, std::uint64_t seed) {
  const int N = int(params.rho.size());
  if (N != g.nodes || params.eta.size() != params.rho.size())
    throw DimensionMismatch("step-size vectors must match the graph size");
  LaplacianInfo info = laplacian(g);
  RngStream rng(seed, 0xdadull);

  auto radius_for = [&](const std::vector<double>& slopes) {
    Matrix x = Matrix::identity(N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) x(i, j) -= params.rho[std::size_t(i)] * info.L(i, j);
      x(i, i) -= params.eta[std::size_t(i)] * slopes[std::size_t(i)];
    }
    double r = 0.0;
    for (const auto& ev : general_eigenvalues(x)) r = std::max(r, std::abs(ev));
    return r;
  };

  double worst = 0.0;
  std::vector<double> slopes(std::size_t(N), params.mu);
  worst = std::max(worst, radius_for(slopes));
  std::fill(slopes.begin(), slopes.end(), params.K);
  worst = std::max(worst, radius_for(slopes));
  std::fill(slopes.begin(), slopes.end(), 0.5 * (params.mu + params.K));
  worst = std::max(worst, radius_for(slopes));
  for (int s = 3; s < samples; ++s) {
    for (double& v : slopes) v = rng.uniform(params.mu, params.K);
    worst = std::max(worst, radius_for(slopes));
  }
  return worst;
}

GridReport grid_search(const DgdParams& base, const Graph& g,
                       const std::vector<GridAxis>& axes, GridMode mode,
                       const SolveOptions& opts) {
  if (axes.empty()) throw EmptyInput("grid needs at least one axis");
  const int N = int(base.rho.size());
  std::vector<AxisTarget> targets;
  std::size_t total = 1;
  for (const GridAxis& axis : axes) {
    if (axis.values.empty()) throw EmptyInput("grid axis has no values");
    for (std::size_t i = 1; i < axis.values.size(); ++i)
      if (!(axis.values[i] > axis.values[i - 1]))
        throw InvalidParameter("grid axis values must be strictly increasing");
    targets.push_back(parse_axis(axis.param, N));
    total *= axis.values.size();
  }

  GridReport report;
  report.axes = axes;
  report.mode = mode;
  report.cells.resize(total);

  auto run_cell = [&](std::size_t flat) {
    GridCell& cell = report.cells[flat];
    DgdParams p = base;
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      std::size_t len = axes[k].values.size();
      apply_axis(p, targets[k], axes[k].values[rem % len]);
      rem /= len;
    }

    try {
      try {
        cell.classical_ok = classical_dgd_check(p, g).ok;
      } catch (const NotApplicable&) {
        cell.classical_ok = false;
      }

      // Sampled necessary condition: a diagonal slope choice whose increment
      // map expands already rules out any rate-one certificate.
      double radius = sampled_increment_radius(p, g, 16, opts.seed);
      if (radius > 1.0 + 1e-6) {
        cell.note = "increment map expands (sampled radius " +
                    std::to_string(radius) + ")";
        return;
      }

      DistributedAlgorithm strict_alg = dgd_algorithm(p, g, {}, true);
      LmiProgram prog = build_program(strict_alg, 1.0, true);
      SolveOptions cell_opts = opts;
      cell_opts.hints.push_back(dgd_rate_one_hint(prog, p));
      FeasibilityResult res = solve_feasibility(prog, cell_opts);
      cell.margin = res.margin;
      cell.certified_sublinear = res.status == Feasibility::Feasible;

      if (mode == GridMode::SublinearAndBisect && cell.certified_sublinear) {
        DistributedAlgorithm plain_alg = dgd_algorithm(p, g, {}, false);
        GammaBisection bis = bisect_gamma(plain_alg, cell_opts);
        if (bis.contractive) cell.gamma_star = bis.gamma_star;
      }
    } catch (const Error& e) {
      cell.note = e.what();
    }
  };

  const int workers = std::min<std::size_t>(worker_count(), total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_cell(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return report;
}

}  // namespace netcon
