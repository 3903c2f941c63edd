#include "netcon/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "netcon/cert_io.hpp"
#include "netcon/config.hpp"
#include "netcon/report.hpp"
#include "netcon/sdpa_io.hpp"

namespace netcon {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string stem(const std::string& path) {
  std::string s = std::filesystem::path(path).stem().string();
  return s.empty() ? path : s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

// "rho", "eta3", or "name=lo:hi:step"; bare names get the default sweep.
GridAxis axis_from_spec(const std::string& spec) {
  GridAxis ax;
  std::string range;
  std::size_t eq = spec.find('=');
  ax.param = spec.substr(0, eq);
  if (eq != std::string::npos) range = spec.substr(eq + 1);

  if (range.empty()) {
    bool rho = ax.param.rfind("rho", 0) == 0;
    bool eta = ax.param.rfind("eta", 0) == 0;
    if (!rho && !eta)
      throw InvalidParameter("axis \"" + ax.param + "\" (want rho/eta[agent])");
    ax.values = rho ? default_rho_axis().values : default_eta_axis().values;
    return ax;
  }

  double lo = 0, hi = 0, step = 0;
  char extra = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3 ||
      !(step > 0) || !(hi >= lo))
    throw InvalidParameter("axis range \"" + range + "\" (want lo:hi:step with step > 0)");
  double tol = 1e-12 * std::max(1.0, std::abs(hi));
  for (int i = 0;; ++i) {
    double v = lo + i * step;
    if (v > hi + tol) break;
    ax.values.push_back(v);
  }
  return ax;
}

void print_certificate_summary(std::ostream& out, const Certificate& cert,
                               int agents) {
  out << "mode: "
      << (cert.mode == CertificateMode::Sublinear ? "sublinear (rate-one strict)"
                                                  : "exponential")
      << "\n";
  if (cert.mode == CertificateMode::Exponential)
    out << "rate gamma: " << num(cert.gamma) << "\n";
  out << "min margin: " << num(cert.min_margin) << " over "
      << cert.margins.size() << " constraints\n";
  if (cert.delta != 0.0) out << "sector perturbation: " << num(cert.delta) << "\n";
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx",
                static_cast<unsigned long long>(cert.fingerprint));
  out << "model fingerprint: " << fp << "\n";
  out << "detectability: all " << agents << " (C_opt, A) pairs detectable\n";
}

int do_certify(const std::string& config_path, std::optional<double> gamma,
               bool bisect, bool sublinear, const std::string& cert_path,
               std::optional<std::uint64_t> seed, std::ostream& out) {
  Config cfg = load_config(config_path);
  if (seed) cfg.solver.seed = *seed;

  DistributedAlgorithm alg = build_algorithm(cfg, sublinear);
  CertifyOutcome outcome;
  if (sublinear) {
    outcome = certify_sublinear(alg, cfg.solver);
  } else if (bisect) {
    GammaBisection b = bisect_gamma(alg, cfg.solver);
    out << "bisection: " << b.solves << " solves, ";
    if (!b.contractive) {
      out << "no contractive rate found\n";
      out << "status: not certified ("
          << to_string(b.result.status) << " at gamma = 1)\n";
      return 1;
    }
    out << "gamma* = " << num(b.gamma_star) << "\n";
    SolveOptions opts = cfg.solver;
    if (!b.result.witness_x.empty()) opts.hints.push_back(b.result.witness_x);
    outcome = certify_exponential(alg, b.gamma_star, opts);
  } else {
    outcome = certify_exponential(alg, *gamma, cfg.solver);
  }

  if (!outcome) {
    out << "status: not certified (" << to_string(outcome.failure.solver_status)
        << ")\n";
    if (!outcome.failure.reason.empty())
      out << "reason: " << outcome.failure.reason << "\n";
    for (int a : outcome.failure.undetectable_agents)
      out << "agent " << (a + 1) << ": (C_opt, A) not detectable\n";
    return 1;
  }

  const Certificate& cert = *outcome.certificate;
  out << "status: certified\n";
  print_certificate_summary(out, cert, int(alg.agents.size()));
  std::ofstream f = open_out(cert_path);
  write_certificate(f, cert);
  out << "certificate: " << cert_path << "\n";
  return 0;
}

int do_grid(const std::string& config_path, std::vector<std::string> axis_specs,
            bool bisect, const std::string& prefix,
            std::optional<std::uint64_t> seed, std::ostream& out) {
  Config cfg = load_config(config_path);
  if (seed) cfg.solver.seed = *seed;
  if (!cfg.dgd)
    throw ConfigError("grid search needs the dgd model form");

  std::vector<GridAxis> axes;
  if (axis_specs.empty()) axis_specs = {"rho", "eta"};
  for (const std::string& spec : axis_specs)
    axes.push_back(axis_from_spec(spec));

  GridMode mode = bisect ? GridMode::SublinearAndBisect : GridMode::Sublinear;
  GridReport report =
      grid_search(cfg.dgd->params, cfg.dgd->graph, axes, mode, cfg.solver);

  std::size_t certified = 0, classical = 0;
  for (const GridCell& c : report.cells) {
    certified += c.certified_sublinear;
    classical += c.classical_ok;
  }
  out << report.cells.size() << " cells, " << certified << " certified, "
      << classical << " satisfy the classical step-size rules\n";

  std::ofstream csv = open_out(prefix + ".csv");
  write_grid_csv(csv, report);
  std::ofstream svg = open_out(prefix + ".svg");
  write_grid_svg(svg, report);
  out << "wrote " << prefix << ".csv and " << prefix << ".svg\n";
  return 0;
}

int do_simulate(const std::string& config_path, int runs, int steps,
                std::uint64_t seed, const std::string& compare_path,
                std::pair<double, double> box, const std::string& prefix,
                std::ostream& out) {
  std::vector<Series> series;
  auto run_one = [&](const std::string& path) {
    Config cfg = load_config(path);
    DistributedAlgorithm alg = build_algorithm(cfg, false);
    RunEnsemble ens = error_ensemble(alg, runs, steps, box, seed);
    series.push_back({stem(path), ens.mean_log_error});
  };
  run_one(config_path);
  if (!compare_path.empty()) run_one(compare_path);

  for (const Series& s : series)
    out << s.label << ": mean log10 error " << num(s.values.front())
        << " at step 0, " << num(s.values.back()) << " at step "
        << (s.values.size() - 1) << "\n";

  std::ofstream csv = open_out(prefix + ".csv");
  write_series_csv(csv, series);
  std::ofstream svg = open_out(prefix + ".svg");
  write_series_svg(svg, series, "mean log10 error");
  out << "wrote " << prefix << ".csv and " << prefix << ".svg\n";
  return 0;
}

int do_classic(const std::string& config_path, std::ostream& out) {
  Config cfg = load_config(config_path);
  if (!cfg.dgd)
    throw ConfigError("the classical step-size check needs the dgd model form");

  const DgdParams& p = cfg.dgd->params;
  ClassicalCheck chk = classical_dgd_check(p, cfg.dgd->graph);
  LaplacianInfo info = laplacian(cfg.dgd->graph);
  out << "max degree: " << num(info.d_max) << "\n";
  out << "lambda_max(L): " << num(info.lambda_max) << "\n";
  out << "rho = " << num(p.rho.front()) << ", bound 1/d_max = "
      << num(chk.rho_bound) << (p.rho.front() < chk.rho_bound ? " ok" : " violated")
      << "\n";
  out << "eta = " << num(p.eta.front()) << ", bound (2 - rho*lambda_max)/K = "
      << num(chk.eta_bound) << (p.eta.front() < chk.eta_bound ? " ok" : " violated")
      << "\n";
  out << (chk.ok ? "pass" : "fail") << "\n";
  return chk.ok ? 0 : 1;
}

int do_verify(const std::string& cert_path, const std::string& config_path,
              std::ostream& out) {
  std::ifstream in(cert_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open certificate " + cert_path);
  Certificate cert = read_certificate(in);

  Config cfg = load_config(config_path);
  bool strict = cert.mode == CertificateMode::Sublinear;
  DistributedAlgorithm alg = build_algorithm(cfg, strict);

  std::uint64_t fp = model_fingerprint(alg);
  if (fp != cert.fingerprint) {
    out << "fingerprint mismatch: certificate does not belong to this model\n";
    return 1;
  }

  LmiProgram prog = build_program(alg, cert.gamma, strict);
  std::vector<double> x;
  try {
    x = assignment_vector(prog, cert.witness);
  } catch (const SolverError& e) {
    out << "witness incomplete: " << e.what() << "\n";
    return 1;
  }
  WitnessCheck chk = verify_witness(prog, x, kEpsPost, cfg.solver.box_bound);
  out << "recomputed min margin: " << num(chk.min_margin) << " (recorded "
      << num(cert.min_margin) << ")\n";
  double drift = std::abs(chk.min_margin - cert.min_margin);
  bool ok = chk.ok && drift <= 1e-9 * std::max(1.0, std::abs(cert.min_margin));
  out << (ok ? "verified" : "verification failed") << "\n";
  return ok ? 0 : 1;
}

int do_export(const std::string& config_path, double gamma, bool strict,
              const std::string& out_path, std::ostream& out) {
  Config cfg = load_config(config_path);
  DistributedAlgorithm alg = build_algorithm(cfg, strict);
  LmiProgram prog = build_program(alg, gamma, strict);
  std::ofstream f = open_out(out_path);
  write_sdp_problem(f, prog, cfg.solver.box_bound);
  out << "wrote " << out_path << " (" << prog.variables.size()
      << " variables, " << prog.constraints.size() << " blocks)\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"convergence certification for networked optimization algorithms"};
  app.require_subcommand(1);

  std::string config, compare, cert_out = "certificate.txt";
  std::string prefix_grid = "grid", prefix_sim = "simulation";
  std::string cert_in, sdp_out = "problem.dat-s";
  std::vector<std::string> axis_specs;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  bool bisect = false, sublinear = false, strict = false;
  int runs = 1000, steps = 60;
  std::uint64_t sim_seed = 0;
  std::pair<double, double> box{-25.0, 25.0};
  double export_gamma = 1.0;

  CLI::App* c = app.add_subcommand("certify", "certify one configured model");
  c->add_option("config", config, "model + solver config (JSON)")->required();
  CLI::Option* og = c->add_option("--gamma", gamma, "certify this exponential rate in (0, 1)");
  CLI::Option* ob = c->add_flag("--bisect", bisect, "bisect the smallest certifiable rate");
  CLI::Option* os = c->add_flag("--sublinear", sublinear, "rate-one strict certificate");
  og->excludes(ob)->excludes(os);
  ob->excludes(os);
  c->add_option("--out", cert_out, "certificate file path");
  c->add_option("--seed", seed, "override the solver seed");

  CLI::App* g = app.add_subcommand("grid", "sweep step-size grids and map certified cells");
  g->add_option("config", config, "dgd config (JSON)")->required();
  g->add_option("--axis", axis_specs,
                "axis spec: rho | eta | rho<k> | eta<k>, optionally =lo:hi:step");
  g->add_flag("--bisect", bisect, "also bisect gamma* on certified cells");
  g->add_option("--out", prefix_grid, "output prefix for .csv/.svg")->required();
  g->add_option("--seed", seed, "override the solver seed");

  CLI::App* s = app.add_subcommand("simulate", "mean log error over random initial states");
  s->add_option("config", config, "dgd config with costs (JSON)")->required();
  s->add_option("--runs", runs, "ensemble size")->check(CLI::PositiveNumber);
  s->add_option("--steps", steps, "horizon")->check(CLI::NonNegativeNumber);
  s->add_option("--seed", sim_seed, "ensemble seed");
  s->add_option("--compare", compare, "second config drawn on the same plot");
  s->add_option("--box", box, "initial-state box (lo hi)");
  s->add_option("--out", prefix_sim, "output prefix for .csv/.svg");

  CLI::App* k = app.add_subcommand("classic", "textbook step-size bounds for homogeneous dgd");
  k->add_option("config", config, "dgd config (JSON)")->required();

  CLI::App* v = app.add_subcommand("verify", "re-verify a certificate against a config");
  v->add_option("certificate", cert_in, "certificate file")->required();
  v->add_option("config", config, "config it claims to certify")->required();

  CLI::App* x = app.add_subcommand("export-sdp", "write the LMI program in SDPA sparse form");
  x->add_option("config", config, "model config (JSON)")->required();
  x->add_option("--gamma", export_gamma, "contraction rate of the exported program");
  x->add_flag("--strict", strict, "strict (rate-one) program; needs gamma = 1");
  x->add_option("--out", sdp_out, "output file");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c)) {
      if (!gamma && !bisect && !sublinear)
        throw InvalidParameter("choose one of --gamma, --bisect, --sublinear");
      return do_certify(config, gamma, bisect, sublinear, cert_out, seed, out);
    }
    if (app.got_subcommand(g))
      return do_grid(config, axis_specs, bisect, prefix_grid, seed, out);
    if (app.got_subcommand(s))
      return do_simulate(config, runs, steps, sim_seed, compare, box, prefix_sim, out);
    if (app.got_subcommand(k)) return do_classic(config, out);
    if (app.got_subcommand(v)) return do_verify(cert_in, config, out);
    if (app.got_subcommand(x))
      return do_export(config, export_gamma, strict, sdp_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(std::size_t(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args));
}

}  // namespace netcon
