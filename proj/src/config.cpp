#include "netcon/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace netcon {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "must be an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing key \"" + std::string(key) + "\"");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "must be an integer");
  return j.get<int>();
}

// Scalars broadcast to one value per agent; arrays pass through.
std::vector<double> as_per_agent(const json& j, int agents,
                                 const std::string& where) {
  if (j.is_number()) return std::vector<double>(std::size_t(agents), j.get<double>());
  if (!j.is_array()) fail(where, "must be a number or an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
  if (int(out.size()) != agents)
    fail(where, "has " + std::to_string(out.size()) + " entries for " +
                    std::to_string(agents) + " agents");
  return out;
}

Matrix as_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "must be a nonempty array of rows");
  int rows = int(j.size());
  const json& first = j[0];
  if (!first.is_array() || first.empty())
    fail(where, "rows must be nonempty arrays");
  int cols = int(first.size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[std::size_t(r)];
    if (!row.is_array() || int(row.size()) != cols)
      fail(where, "row " + std::to_string(r) + " must have " +
                      std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m(r, c) = as_number(row[std::size_t(c)],
                          where + "[" + std::to_string(r) + "][" +
                              std::to_string(c) + "]");
  }
  return m;
}

Graph as_graph(const json& j, const std::string& where) {
  int nodes = as_int(need(j, "nodes", where), where + ".nodes");
  const json& edges = need(j, "edges", where);
  if (!edges.is_array()) fail(where + ".edges", "must be an array of pairs");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    std::string ew = where + ".edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) fail(ew, "must be a pair of node ids");
    pairs.emplace_back(as_int(e[0], ew), as_int(e[1], ew));
  }
  return Graph::make(nodes, std::move(pairs));
}

DgdConfig parse_dgd(const json& j, const std::string& where) {
  DgdConfig out;
  out.graph = as_graph(need(j, "graph", where), where + ".graph");
  int agents = out.graph.nodes;
  out.params.rho = as_per_agent(need(j, "rho", where), agents, where + ".rho");
  out.params.eta = as_per_agent(need(j, "eta", where), agents, where + ".eta");
  out.params.mu = as_number(need(j, "mu", where), where + ".mu");
  out.params.K = as_number(need(j, "K", where), where + ".K");
  out.params.n = j.contains("n") ? as_int(j["n"], where + ".n") : 1;
  if (j.contains("costs")) {
    const json& costs = j["costs"];
    std::string cw = where + ".costs";
    std::vector<double> a = as_per_agent(need(costs, "a", cw), agents, cw + ".a");
    std::vector<double> b = as_per_agent(need(costs, "b", cw), agents, cw + ".b");
    for (int i = 0; i < agents; ++i)
      out.costs.push_back({a[std::size_t(i)], b[std::size_t(i)]});
  }
  return out;
}

SectorConfig parse_sector(const json& j, const std::string& where) {
  SectorConfig out;
  bool has_mu_k = j.contains("mu") || j.contains("K");
  bool has_s = j.contains("S");
  if (has_mu_k == has_s)
    fail(where, "needs either {mu, K} or an explicit S matrix");
  if (has_mu_k) {
    out.mu_k = {as_number(need(j, "mu", where), where + ".mu"),
                as_number(need(j, "K", where), where + ".K")};
  } else {
    Matrix s = as_matrix(j["S"], where + ".S");
    if (s.rows() != s.cols()) fail(where + ".S", "must be square");
    out.s = SymMatrix::symmetrized(s);
    if (max_abs_diff(out.s->full(), s) > 0.0)
      fail(where + ".S", "must be symmetric");
  }
  if (j.contains("strict")) {
    if (!j["strict"].is_boolean()) fail(where + ".strict", "must be a boolean");
    out.strict = j["strict"].get<bool>();
  }
  return out;
}

GeneralConfig parse_general(const json& j, const std::string& where) {
  GeneralConfig out;
  const json& agents = need(j, "agents", where);
  if (!agents.is_array() || agents.empty())
    fail(where + ".agents", "must be a nonempty array");
  static const char* kMats[] = {"A",     "B",     "G",     "C_con", "D_con",
                                "H_con", "C_opt", "D_opt", "H_opt"};
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::string aw = where + ".agents[" + std::to_string(i) + "]";
    const json& a = agents[i];
    Matrix m[9];
    for (int k = 0; k < 9; ++k)
      m[k] = as_matrix(need(a, kMats[k], aw), aw + "." + kMats[k]);
    GeneralAgentConfig agent;
    agent.dynamics = AgentDynamics::make(m[0], m[1], m[2], m[3], m[4], m[5],
                                         m[6], m[7], m[8]);
    const json& sector = need(a, "sector", aw);
    if (sector.is_array()) {
      for (std::size_t k = 0; k < sector.size(); ++k)
        agent.bounds.push_back(parse_sector(
            sector[k], aw + ".sector[" + std::to_string(k) + "]"));
    } else {
      agent.bounds.push_back(parse_sector(sector, aw + ".sector"));
    }
    out.agents.push_back(std::move(agent));
  }
  bool has_m = j.contains("M");
  bool has_graph = j.contains("graph");
  if (has_m == has_graph)
    fail(where, "needs exactly one of \"M\" or \"graph\"");
  if (has_m) {
    out.coupling = as_matrix(j["M"], where + ".M");
  } else {
    out.graph = as_graph(j["graph"], where + ".graph");
    if (j.contains("per_channel_dim"))
      out.per_channel_dim = as_int(j["per_channel_dim"], where + ".per_channel_dim");
  }
  return out;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");

  Config c;
  const json& model = need(root, "model", origin);
  bool has_dgd = model.contains("dgd");
  bool has_general = model.contains("general");
  if (has_dgd == has_general)
    fail(origin + ".model", "needs exactly one of \"dgd\" or \"general\"");
  if (has_dgd) c.dgd = parse_dgd(model["dgd"], origin + ".model.dgd");
  if (has_general)
    c.general = parse_general(model["general"], origin + ".model.general");

  if (root.contains("solver")) {
    const json& s = root["solver"];
    std::string sw = origin + ".solver";
    if (!s.is_object()) fail(sw, "must be an object");
    if (s.contains("B")) c.solver.box_bound = as_number(s["B"], sw + ".B");
    if (s.contains("eps")) c.solver.eps = as_number(s["eps"], sw + ".eps");
    if (s.contains("max_iter"))
      c.solver.max_iter = as_int(s["max_iter"], sw + ".max_iter");
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) fail(sw + ".seed", "must be a nonnegative integer");
      c.solver.seed = s["seed"].get<std::uint64_t>();
    }
    for (auto it = s.begin(); it != s.end(); ++it)
      if (it.key() != "B" && it.key() != "eps" && it.key() != "max_iter" &&
          it.key() != "seed")
        fail(sw, "unknown key \"" + it.key() + "\"");
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

DistributedAlgorithm build_algorithm(const Config& c, bool strict_sector) {
  if (c.dgd.has_value() == c.general.has_value())
    throw ConfigError("config must hold exactly one model form");

  if (c.dgd) {
    const DgdConfig& d = *c.dgd;
    std::vector<OracleFn> evaluators;
    if (!d.costs.empty())
      evaluators = quadratic_gradients(d.costs, d.params.mu, d.params.K);
    return dgd_algorithm(d.params, d.graph, std::move(evaluators), strict_sector);
  }

  const GeneralConfig& g = *c.general;
  DistributedAlgorithm alg;
  for (std::size_t i = 0; i < g.agents.size(); ++i) {
    const GeneralAgentConfig& a = g.agents[i];
    OracleSpec oracle;
    for (const SectorConfig& sc : a.bounds) {
      if (sc.mu_k) {
        if (a.dynamics.q != a.dynamics.n_w)
          throw ConfigError("agent " + std::to_string(i + 1) +
                            ": a mu/K sector needs square oracles (q == n_w)");
        oracle.bounds.push_back(sector_monotone_lipschitz(
            sc.mu_k->first, sc.mu_k->second, a.dynamics.q, strict_sector));
      } else {
        if (sc.s->dim() != a.dynamics.q + a.dynamics.n_w)
          throw ConfigError("agent " + std::to_string(i + 1) +
                            ": sector matrix dimension must be q + n_w");
        oracle.bounds.push_back({*sc.s, sc.strict});
      }
    }
    alg.agents.push_back({a.dynamics, std::move(oracle)});
  }
  if (g.coupling) {
    alg.network = network_explicit(*g.coupling);
  } else {
    if (g.per_channel_dim < 1) throw ConfigError("per_channel_dim must be positive");
    alg.network = network_from_graph_laplacian(*g.graph, g.per_channel_dim);
  }
  return alg;
}

}  // namespace netcon
