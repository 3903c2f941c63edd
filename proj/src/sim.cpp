#include "netcon/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "netcon/rng.hpp"

namespace netcon {

namespace {

int env_workers() {
  const char* env = std::getenv("NETCON_WORKERS");
  if (!env) return 1;
  return std::max(1, std::min(std::atoi(env), 64));
}

}  // namespace

std::vector<OracleFn> quadratic_gradients(const std::vector<QuadraticCost>& costs,
                                          double mu, double K) {
  if (costs.empty()) throw EmptyInput("no costs given");
  std::vector<OracleFn> out;
  out.reserve(costs.size());
  for (const QuadraticCost& cost : costs) {
    if (!(cost.a > 0.0)) throw InvalidParameter("cost curvature must be positive");
    const double slope = 2.0 * cost.a;
    if (slope < mu || slope > K)
      throw InvalidParameter("gradient slope " + std::to_string(slope) +
                             " lies outside the sector");
    out.push_back([a = cost.a, b = cost.b](const std::vector<double>& z) {
      std::vector<double> w(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) w[i] = 2.0 * a * (z[i] - b);
      return w;
    });
  }
  return out;
}

Simulator::Simulator(const DistributedAlgorithm& alg) : alg_(alg) {
  if (alg.agents.empty()) throw EmptyInput("no agents to simulate");
  std::vector<Matrix> a, b, g, c_con, d_con, h_con, c_opt;
  int z_off = 0;
  for (std::size_t i = 0; i < alg.agents.size(); ++i) {
    const AgentDynamics& d = alg.agents[i].dynamics;
    if (d.D_opt.max_abs() != 0.0 || d.H_opt.max_abs() != 0.0)
      throw ModelError("simulation needs D_opt = 0 and H_opt = 0 (agent " +
                       std::to_string(i) + ")");
    if (d.n_w > 0 && !alg.agents[i].oracle.evaluator)
      throw NoOracleEvaluator("agent " + std::to_string(i) +
                              " has no oracle evaluator");
    a.push_back(d.A);
    b.push_back(d.B);
    g.push_back(d.G);
    c_con.push_back(d.C_con);
    d_con.push_back(d.D_con);
    h_con.push_back(d.H_con);
    c_opt.push_back(d.C_opt);
    z_spans_.emplace_back(z_off, d.q);
    z_off += d.q;
  }
  a_ = block_diag(a);
  b_ = block_diag(b);
  g_ = block_diag(g);
  c_con_ = block_diag(c_con);
  h_con_ = block_diag(h_con);
  Matrix d_bar = block_diag(d_con);
  m_ = alg.network.M;
  n_ = alg.total_nx();
  if (m_.rows() != alg.total_nu() || m_.cols() != alg.total_p())
    throw DimensionMismatch("coupling map does not match stacked outputs");
  Matrix c_opt_bar = block_diag(c_opt);
  c_opt_ = c_opt_bar;

  Matrix loop = Matrix::identity(alg.total_p()) - d_bar * m_;
  loop_ = LuFactors::factor(loop);
  if (loop_->singular(1e-12)) throw ModelError("output loop is singular");
}

std::vector<double> Simulator::step(const std::vector<double>& x) const {
  if (int(x.size()) != n_) throw DimensionMismatch("state length");
  std::vector<double> z = c_opt_ * x;
  std::vector<double> w(std::size_t(alg_.total_nw()), 0.0);
  int w_off = 0;
  for (std::size_t i = 0; i < alg_.agents.size(); ++i) {
    const AgentDynamics& d = alg_.agents[i].dynamics;
    if (d.n_w == 0) continue;
    auto [zo, q] = z_spans_[i];
    std::vector<double> zi(z.begin() + zo, z.begin() + zo + q);
    std::vector<double> wi = alg_.agents[i].oracle.evaluator(zi);
    if (int(wi.size()) != d.n_w)
      throw ModelError("oracle evaluator returned a wrong-sized vector");
    std::copy(wi.begin(), wi.end(), w.begin() + w_off);
    w_off += d.n_w;
  }

  std::vector<double> rhs = c_con_ * x;
  std::vector<double> hw = h_con_ * w;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += hw[i];
  std::vector<double> y = loop_->solve(rhs);
  std::vector<double> u = m_ * y;

  std::vector<double> next = a_ * x;
  std::vector<double> bu = b_ * u;
  std::vector<double> gw = g_ * w;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += bu[i] + gw[i];
  return next;
}

Trajectory Simulator::run(std::vector<double> x0, int horizon) const {
  if (horizon < 0) throw InvalidParameter("horizon must be nonnegative");
  Trajectory t;
  t.horizon = horizon;
  t.states.reserve(std::size_t(horizon) + 1);
  t.states.push_back(std::move(x0));
  for (int k = 0; k < horizon; ++k) t.states.push_back(step(t.states.back()));
  return t;
}

std::vector<double> step(const DistributedAlgorithm& alg,
                         const std::vector<double>& x) {
  return Simulator(alg).step(x);
}

std::vector<double> fixed_point_affine(const DistributedAlgorithm& alg) {
  Simulator sim(alg);
  const int n = sim.state_dim();
  std::vector<double> zero(std::size_t(n), 0.0);
  std::vector<double> c = sim.step(zero);

  Matrix x_map(n, n);
  std::vector<double> e(std::size_t(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[std::size_t(j)] = 1.0;
    std::vector<double> col = sim.step(e);
    for (int i = 0; i < n; ++i) x_map(i, j) = col[std::size_t(i)] - c[std::size_t(i)];
    e[std::size_t(j)] = 0.0;
  }

  // One random probe distinguishes an affine loop from a genuinely
  // nonlinear one up to roundoff.
  RngStream rng(0x0af1ull);
  std::vector<double> probe(std::size_t(n), 0.0);
  for (double& v : probe) v = rng.uniform(-1.0, 1.0);
  std::vector<double> direct = sim.step(probe);
  std::vector<double> predicted = x_map * probe;
  double scale = 1.0;
  for (double v : direct) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i) {
    if (std::abs(direct[std::size_t(i)] - predicted[std::size_t(i)] - c[std::size_t(i)]) >
        1e-9 * scale)
      throw ModelError("closed loop is not affine");
  }

  Matrix i_minus_x = Matrix::identity(n) - x_map;
  LuFactors lu = LuFactors::factor(i_minus_x);
  if (lu.singular(1e-12))
    throw NoUniqueFixedPoint("increment map has a unit eigenvalue");
  return lu.solve(c);
}

RunEnsemble error_ensemble(const DistributedAlgorithm& alg, int runs, int horizon,
                           std::pair<double, double> init_box, std::uint64_t seed,
                           const std::optional<std::vector<double>>& reference) {
  if (runs < 1) throw InvalidParameter("need at least one run");
  if (horizon < 0) throw InvalidParameter("horizon must be nonnegative");
  if (!(init_box.first < init_box.second))
    throw InvalidParameter("initial box is empty");

  Simulator sim(alg);
  const int n = sim.state_dim();
  std::vector<double> ref = reference ? *reference : fixed_point_affine(alg);
  if (int(ref.size()) != n) throw DimensionMismatch("reference length");

  RunEnsemble ens;
  ens.runs = runs;
  ens.seed = seed;
  ens.error_curves.assign(std::size_t(runs), {});

  auto run_one = [&](int r) {
    RngStream rng(seed, std::uint64_t(r));
    std::vector<double> x(std::size_t(n), 0.0);
    for (double& v : x) v = rng.uniform(init_box.first, init_box.second);
    std::vector<double>& curve = ens.error_curves[std::size_t(r)];
    curve.reserve(std::size_t(horizon) + 1);
    for (int k = 0;; ++k) {
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = x[std::size_t(i)] - ref[std::size_t(i)];
        err += d * d;
      }
      curve.push_back(std::sqrt(err));
      if (k == horizon) break;
      x = sim.step(x);
    }
  };

  const int workers = std::min(env_workers(), runs);
  if (workers <= 1) {
    for (int r = 0; r < runs; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) run_one(r);
      });
    for (std::thread& t : pool) t.join();
  }

  ens.mean_log_error.assign(std::size_t(horizon) + 1, 0.0);
  for (int k = 0; k <= horizon; ++k) {
    double sum = 0.0;
    for (int r = 0; r < runs; ++r) {
      double e = ens.error_curves[std::size_t(r)][std::size_t(k)];
      sum += e > 0.0 ? std::log10(e) : -16.0;
    }
    ens.mean_log_error[std::size_t(k)] = sum / runs;
  }
  return ens;
}

SymMatrix storage_matrix(const DistributedAlgorithm& alg, const Assignment& witness) {
  std::vector<SymMatrix> blocks;
  for (std::size_t i = 0; i < alg.agents.size(); ++i) {
    const int nx = alg.agents[i].dynamics.n_x;
    SymMatrix p(nx);
    for (int a = 0; a < nx; ++a) {
      for (int b = a; b < nx; ++b) {
        auto it = witness.values.find(VarId{VarKind::P, int(i), a, b});
        if (it == witness.values.end())
          throw SolverError("witness is missing a storage entry");
        p.set(a, b, it->second);
      }
    }
    blocks.push_back(p);
  }
  return block_diag(blocks);
}

ContractionEstimate empirical_contraction(const DistributedAlgorithm& alg, int pairs,
                                          int horizon, std::uint64_t seed,
                                          const Certificate* cert,
                                          double init_half_width) {
  if (pairs < 1) throw InvalidParameter("need at least one pair");
  if (horizon < 1) throw InvalidParameter("horizon must be positive");

  Simulator sim(alg);
  const int n = sim.state_dim();
  std::optional<SymMatrix> p_bar;
  if (cert) p_bar = storage_matrix(alg, cert->witness);
  auto v_of = [&](const std::vector<double>& d) {
    if (!p_bar) return dot(d, d);
    return dot(d, p_bar->full() * d);
  };

  ContractionEstimate est;
  est.per_step_ratios.assign(std::size_t(horizon), 0.0);
  for (int pr = 0; pr < pairs; ++pr) {
    RngStream ra(seed, std::uint64_t(2 * pr));
    RngStream rb(seed, std::uint64_t(2 * pr) + 1);
    std::vector<double> xa(std::size_t(n), 0.0), xb(std::size_t(n), 0.0);
    for (double& v : xa) v = ra.uniform(-init_half_width, init_half_width);
    for (double& v : xb) v = rb.uniform(-init_half_width, init_half_width);

    std::vector<double> d(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) d[std::size_t(i)] = xa[std::size_t(i)] - xb[std::size_t(i)];
    double v_prev = v_of(d);
    for (int k = 0; k < horizon; ++k) {
      xa = sim.step(xa);
      xb = sim.step(xb);
      for (int i = 0; i < n; ++i)
        d[std::size_t(i)] = xa[std::size_t(i)] - xb[std::size_t(i)];
      double v_next = v_of(d);
      if (v_prev > 1e-280) {
        double ratio = v_next / v_prev;
        est.per_step_ratios[std::size_t(k)] =
            std::max(est.per_step_ratios[std::size_t(k)], ratio);
        est.rate_estimate = std::max(est.rate_estimate, ratio);
      }
      v_prev = v_next;
    }
  }
  return est;
}

}  // namespace netcon
