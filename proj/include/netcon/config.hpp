#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netcon/model.hpp"
#include "netcon/sdp.hpp"
#include "netcon/sim.hpp"

namespace netcon {

struct DgdConfig {
  Graph graph = Graph::make(1, {});
  DgdParams params;
  std::vector<QuadraticCost> costs;  // empty when the config names none
};

// One oracle bound in a general-form config: a mu/K product sector (strict
// variant chosen at build time) or an explicit quadratic-constraint matrix
// with a fixed strict flag.
struct SectorConfig {
  std::optional<std::pair<double, double>> mu_k;
  std::optional<SymMatrix> s;
  bool strict = false;
};

struct GeneralAgentConfig {
  AgentDynamics dynamics;
  std::vector<SectorConfig> bounds;
};

struct GeneralConfig {
  std::vector<GeneralAgentConfig> agents;
  std::optional<Matrix> coupling;  // explicit M
  std::optional<Graph> graph;      // or a Laplacian-built M
  int per_channel_dim = 1;
};

struct Config {
  std::optional<DgdConfig> dgd;
  std::optional<GeneralConfig> general;
  SolveOptions solver;
};

// JSON text -> validated Config. origin names the source in diagnostics.
Config parse_config(const std::string& text, const std::string& origin = "config");
Config load_config(const std::string& path);

// Instantiates the configured model. strict_sector asks every mu/K bound for
// its perturbed strict variant (the rate-one path needs it); explicit-matrix
// bounds keep the strictness they were configured with.
DistributedAlgorithm build_algorithm(const Config& c, bool strict_sector);

}  // namespace netcon
