#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "netcon/matrix.hpp"
#include "netcon/model.hpp"
#include "netcon/rng.hpp"

using namespace netcon;

namespace {

Graph test_graph() { return Graph::make(4, {{1, 2}, {2, 3}, {3, 4}, {4, 2}}); }

double quad_form(const SymMatrix& s, const std::vector<double>& v) {
  double acc = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) acc += v[i] * s(i, j) * v[j];
  return acc;
}

}  // namespace

TEST_CASE("monotone sector bound") {
  auto b = sector_monotone(0.05, 1);
  CHECK(max_abs_diff(b.S.full(), Matrix{{0.1, -1}, {-1, 0}}) == 0.0);
  CHECK_FALSE(b.strict);

  auto b2 = sector_monotone(0.5, 1);
  CHECK(max_abs_diff(b2.S.full(), Matrix{{1, -1}, {-1, 0}}) == 0.0);

  CHECK_THROWS_AS(sector_monotone(0.0, 1), InvalidParameter);
  CHECK_THROWS_AS(sector_monotone(-0.1, 1), InvalidParameter);

  // Quadratic form at dw = dz collapses to 2(mu - 1)||dz||^2.
  RngStream rng(1);
  for (int t = 0; t < 20; ++t) {
    double mu = rng.uniform(0.01, 2.0);
    auto s = sector_monotone(mu, 2);
    std::vector<double> z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    std::vector<double> v{z[0], z[1], z[0], z[1]};
    double n2 = z[0] * z[0] + z[1] * z[1];
    CHECK(quad_form(s.S, v) ==
          doctest::Approx(2.0 * mu * n2 - 2.0 * n2).epsilon(1e-12));
  }
}

TEST_CASE("lipschitz sector bound") {
  auto b = sector_lipschitz(1.0, 1);
  CHECK(max_abs_diff(b.S.full(), Matrix{{-1, 0}, {0, 1}}) == 0.0);

  auto b2 = sector_lipschitz(2.0, 2);
  Matrix expect(4, 4);
  expect(0, 0) = expect(1, 1) = -4.0;
  expect(2, 2) = expect(3, 3) = 1.0;
  CHECK(max_abs_diff(b2.S.full(), expect) == 0.0);

  CHECK_THROWS_AS(sector_lipschitz(0.0, 1), InvalidParameter);

  // dw = 0 leaves -K^2 ||dz||^2, never positive.
  RngStream rng(2);
  for (int t = 0; t < 20; ++t) {
    auto s = sector_lipschitz(rng.uniform(0.1, 3.0), 1);
    std::vector<double> v{rng.uniform(-5, 5), 0.0};
    CHECK(quad_form(s.S, v) <= 0.0);
  }
}

TEST_CASE("sector_combine is a weighted sum") {
  auto mon = sector_monotone(0.05, 1);
  auto lip = sector_lipschitz(1.0, 1);

  auto first = sector_combine({mon, lip}, {1.0, 0.0});
  CHECK(max_abs_diff(first.S.full(), mon.S.full()) == 0.0);

  auto once = sector_combine({mon, lip}, {1.0, 1.0});
  auto twice = sector_combine({mon, lip}, {2.0, 2.0});
  CHECK(max_abs_diff(twice.S.full(), (2.0 * once.S).full()) < 1e-15);

  auto strict_mon = mon;
  strict_mon.strict = true;
  CHECK(sector_combine({strict_mon, lip}, {1.0, 1.0}).strict);
  CHECK_FALSE(sector_combine({strict_mon, lip}, {0.0, 1.0}).strict);

  CHECK_THROWS_AS(sector_combine({mon, sector_lipschitz(1.0, 2)}, {1.0, 1.0}),
                  DimensionMismatch);
  CHECK_THROWS_AS(sector_combine({mon, lip}, {0.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(sector_combine({mon, lip}, {-1.0, 2.0}), InvalidParameter);
}

TEST_CASE("combined monotone+lipschitz sector matches the product form") {
  auto b = sector_monotone_lipschitz(0.05, 1.0, 1);
  CHECK(max_abs_diff(b.S.full(), Matrix{{0.1, -1.05}, {-1.05, 2}}) < 1e-15);
  CHECK_FALSE(b.strict);

  auto bs = sector_monotone_lipschitz(0.05, 1.0, 1, true);
  CHECK(bs.strict);
  // Perturbation widens the sector: the cross term grows by
  // delta * (K - mu); the diagonal moves only at order delta^2.
  CHECK(std::abs(bs.S(0, 1)) > std::abs(b.S(0, 1)));
  CHECK(bs.S(1, 1) == b.S(1, 1));
  CHECK(std::abs(bs.S(0, 1) - b.S(0, 1)) < 1e-6);

  CHECK_THROWS_AS(sector_monotone_lipschitz(1.0, 0.5, 1), InvalidParameter);
}

TEST_CASE("linear oracles inside the sector satisfy the combined bound") {
  RngStream rng(3);
  for (int t = 0; t < 500; ++t) {
    double mu = rng.uniform(0.01, 1.0);
    double K = mu + rng.uniform(0.0, 2.0);
    auto plain = sector_monotone_lipschitz(mu, K, 1);
    auto strict = sector_monotone_lipschitz(mu, K, 1, true);
    double c = rng.uniform(mu, K);
    double dz = rng.uniform(-10.0, 10.0);
    std::vector<double> v{dz, c * dz};
    CHECK(quad_form(plain.S, v) <= 1e-12 * (1.0 + dz * dz));
    if (dz != 0.0) CHECK(quad_form(strict.S, v) < 0.0);
  }
}

TEST_CASE("laplacian of the 4-node test graph") {
  auto info = laplacian(test_graph());
  Matrix expect{{1, -1, 0, 0}, {-1, 3, -1, -1}, {0, -1, 2, -1}, {0, -1, -1, 2}};
  CHECK(max_abs_diff(info.L, expect) == 0.0);
  CHECK(info.d_max == 3.0);
  CHECK(info.lambda_max == doctest::Approx(4.0).epsilon(1e-12));
  double spectrum[4] = {0, 1, 3, 4};
  for (int i = 0; i < 4; ++i)
    CHECK(info.eigenvalues[i] == doctest::Approx(spectrum[i]).epsilon(1e-10));

  auto k2 = laplacian(Graph::make(2, {{1, 2}}));
  CHECK(max_abs_diff(k2.L, Matrix{{1, -1}, {-1, 1}}) == 0.0);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph::make(3, {{1, 1}}), InvalidGraph);
  CHECK_THROWS_AS(Graph::make(3, {{1, 2}, {2, 1}}), InvalidGraph);  // dup
  CHECK_THROWS_AS(Graph::make(3, {{1, 4}}), InvalidGraph);
  CHECK(Graph::make(3, {{2, 1}}).edges.front() == std::pair<int, int>{1, 2});
  CHECK(Graph::make(2, {{1, 2}}).connected());
  CHECK_FALSE(Graph::make(3, {{1, 2}}).connected());
}

TEST_CASE("laplacian row sums vanish and lambda_min is zero when connected") {
  RngStream rng(4);
  for (int t = 0; t < 40; ++t) {
    int n = rng.uniform_int(2, 8);
    std::set<std::pair<int, int>> edges;
    for (int v = 2; v <= n; ++v) {
      int u = rng.uniform_int(1, v - 1);
      edges.insert({u, v});
    }
    for (int extra = rng.uniform_int(0, n); extra > 0; --extra) {
      int a = rng.uniform_int(1, n), b = rng.uniform_int(1, n);
      if (a == b) continue;
      edges.insert({std::min(a, b), std::max(a, b)});
    }
    auto g = Graph::make(n, {edges.begin(), edges.end()});
    REQUIRE(g.connected());
    auto info = laplacian(g);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += info.L(i, j);
      CHECK(std::abs(row) == 0.0);
    }
    CHECK(std::abs(info.eigenvalues.front()) < 1e-10);
  }
}

TEST_CASE("consensus contraction factor sigma") {
  auto info = laplacian(test_graph());
  // Eigenvalues of I - rho L at rho = 0.25: {1, 0.75, 0.25, 0}.
  CHECK(info.sigma(0.25) == doctest::Approx(0.75).epsilon(1e-12));
  // At rho = 0.5 the extremes tie at magnitude 1.
  CHECK(info.sigma(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dgd model assembly") {
  DgdParams params{{0.35, 0.35, 0.35, 0.35}, {0.025, 0.025, 0.025, 0.025},
                   0.05, 1.0, 1};
  auto alg = dgd_algorithm(params, test_graph());
  REQUIRE(alg.agents.size() == 4);
  for (const auto& a : alg.agents) {
    CHECK(max_abs_diff(a.dynamics.A, Matrix{{1}}) == 0.0);
    CHECK(max_abs_diff(a.dynamics.B, Matrix{{-0.35}}) == 0.0);
    CHECK(max_abs_diff(a.dynamics.G, Matrix{{-0.025}}) == 0.0);
    CHECK(max_abs_diff(a.dynamics.C_con, Matrix{{1}}) == 0.0);
    CHECK(max_abs_diff(a.dynamics.C_opt, Matrix{{1}}) == 0.0);
    CHECK(a.dynamics.D_con.max_abs() == 0.0);
    CHECK(a.dynamics.H_con.max_abs() == 0.0);
    CHECK(a.dynamics.D_opt.max_abs() == 0.0);
    CHECK(a.dynamics.H_opt.max_abs() == 0.0);
    REQUIRE(a.oracle.bounds.size() == 1);
    CHECK(max_abs_diff(a.oracle.bounds[0].S.full(),
                       Matrix{{0.1, -1.05}, {-1.05, 2}}) < 1e-15);
  }
  CHECK(alg.network.origin == NetworkOrigin::LaplacianOfGraph);
  CHECK(max_abs_diff(alg.network.M, laplacian(test_graph()).L) == 0.0);

  CHECK_THROWS_AS(
      dgd_algorithm(params, Graph::make(4, {{1, 2}, {3, 4}})),
      DisconnectedGraph);
}

TEST_CASE("dgd with n > 1 is the Kronecker lift of the scalar model") {
  DgdParams p1{{0.3, 0.4, 0.5, 0.2}, {0.02, 0.03, 0.04, 0.05}, 0.05, 1.0, 1};
  DgdParams p3 = p1;
  p3.n = 3;
  auto a1 = dgd_algorithm(p1, test_graph());
  auto a3 = dgd_algorithm(p3, test_graph());
  Matrix I3 = Matrix::identity(3);
  for (int i = 0; i < 4; ++i) {
    CHECK(max_abs_diff(a3.agents[i].dynamics.A,
                       kron(a1.agents[i].dynamics.A, I3)) == 0.0);
    CHECK(max_abs_diff(a3.agents[i].dynamics.B,
                       kron(a1.agents[i].dynamics.B, I3)) == 0.0);
    CHECK(max_abs_diff(a3.agents[i].dynamics.G,
                       kron(a1.agents[i].dynamics.G, I3)) == 0.0);
  }
  CHECK(max_abs_diff(a3.network.M, kron(a1.network.M, I3)) == 0.0);
}

TEST_CASE("heterogeneous dgd differs only in the stepped agent's B and G") {
  DgdParams hom{{0.35, 0.35, 0.35, 0.35}, {0.025, 0.025, 0.025, 0.025},
                0.05, 1.0, 1};
  DgdParams het = hom;
  het.rho[0] = 1.05;
  het.eta[0] = 0.075;
  auto a = dgd_algorithm(hom, test_graph());
  auto b = dgd_algorithm(het, test_graph());
  CHECK(b.agents[0].dynamics.B(0, 0) == doctest::Approx(-1.05));
  CHECK(b.agents[0].dynamics.G(0, 0) == doctest::Approx(-0.075));
  for (int i = 1; i < 4; ++i) {
    CHECK(max_abs_diff(a.agents[i].dynamics.B, b.agents[i].dynamics.B) == 0.0);
    CHECK(max_abs_diff(a.agents[i].dynamics.G, b.agents[i].dynamics.G) == 0.0);
  }
}

TEST_CASE("well-posedness") {
  DgdParams params{{0.35, 0.35, 0.35, 0.35}, {0.025, 0.025, 0.025, 0.025},
                   0.05, 1.0, 1};
  auto dgd = dgd_algorithm(params, test_graph());
  auto wp = check_well_posed(dgd);
  CHECK(bool(wp));
  CHECK(wp.interconnection_invertible);
  CHECK(wp.explicit_oracle_loop);

  // Scalar agent with D_con = 1 coupled through M = 1: I - D M = 0.
  Matrix one{{1}}, zero{{0}};
  Agent a;
  a.dynamics = AgentDynamics::make(one, one, one, one, one, zero, one, zero,
                                   zero);
  a.oracle.bounds = {sector_monotone_lipschitz(0.5, 1.0, 1)};
  DistributedAlgorithm singularLoop;
  singularLoop.agents = {a};
  singularLoop.network = network_explicit(one);
  CHECK_FALSE(bool(check_well_posed(singularLoop)));

  // Small-gain case: ||D_con M|| < 1 keeps the loop invertible.
  RngStream rng(9);
  for (int t = 0; t < 20; ++t) {
    Matrix d(1, 1), m(1, 1);
    d(0, 0) = rng.uniform(-0.9, 0.9);
    m(0, 0) = rng.uniform(-1.0, 1.0);
    Agent ag;
    ag.dynamics = AgentDynamics::make(one, one, one, one, d, zero, one, zero,
                                      zero);
    ag.oracle.bounds = {sector_monotone_lipschitz(0.5, 1.0, 1)};
    DistributedAlgorithm alg;
    alg.agents = {ag};
    alg.network = network_explicit(m);
    CHECK(check_well_posed(alg).interconnection_invertible);
  }
}

TEST_CASE("PBH detectability") {
  CHECK(check_detectable(Matrix{{1}}, Matrix{{1}}));
  CHECK_FALSE(check_detectable(Matrix{{0}}, Matrix{{1}}));
  CHECK(check_detectable(Matrix{{0}}, Matrix{{0.5}}));

  // Marginally stable rotation: complex pair on the unit circle. Observed
  // through the first coordinate it is detectable; unobserved it is not.
  double th = 0.7;
  Matrix rot{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}};
  CHECK(check_detectable(Matrix{{1, 0}}, rot));
  CHECK_FALSE(check_detectable(Matrix{{0, 0}}, rot));

  // Unstable and stable modes mixed: only the unstable one must be seen.
  Matrix mix{{1.1, 0}, {0, 0.3}};
  CHECK(check_detectable(Matrix{{1, 0}}, mix));
  CHECK_FALSE(check_detectable(Matrix{{0, 1}}, mix));
}

TEST_CASE("fixed point residuals") {
  DgdParams params{{0.35, 0.35, 0.35, 0.35}, {0.025, 0.025, 0.025, 0.025},
                   0.05, 1.0, 1};
  auto alg = dgd_algorithm(params, test_graph());

  auto zero = fixed_point_residuals(alg, {2, 2, 2, 2}, {1, -1, 0.5, -0.5});
  CHECK(zero.consensus == 0.0);
  CHECK(zero.optimality == 0.0);

  auto r = fixed_point_residuals(alg, {1, 1, 1, 2}, {1, 1, 1, 1});
  CHECK(r.consensus == doctest::Approx(1.0));
  CHECK(r.optimality == doctest::Approx(4.0));

  CHECK_THROWS_AS(fixed_point_residuals(alg, {1, 1}, {1, 1, 1, 1}),
                  DimensionMismatch);
}

TEST_CASE("agent dynamics shape validation") {
  Matrix one{{1}}, zero{{0}};
  CHECK_THROWS_AS(
      AgentDynamics::make(Matrix{{1, 0}}, one, one, one, zero, zero, one,
                          zero, zero),
      DimensionMismatch);
  CHECK_THROWS_AS(
      AgentDynamics::make(one, Matrix{{1}, {1}}, one, one, zero, zero, one,
                          zero, zero),
      DimensionMismatch);
  Matrix bad{{std::nan("")}};
  CHECK_THROWS_AS(
      AgentDynamics::make(bad, one, one, one, zero, zero, one, zero, zero),
      InvalidMatrix);
}
