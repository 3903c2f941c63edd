#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "netcon/cli.hpp"

using namespace netcon;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path tmp_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "netcon-cli-tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string tmp(const std::string& name) { return (tmp_root() / name).string(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::string dgd_config(const std::string& rho, const std::string& eta,
                       bool costs = true) {
  std::string text = R"({
  "model": {
    "dgd": {
      "graph": {"nodes": 4, "edges": [[1,2],[2,3],[3,4],[4,2]]},
      "rho": )" + rho + R"(,
      "eta": )" + eta + R"(,
      "mu": 0.05,
      "K": 1.0)";
  if (costs)
    text += R"(,
      "costs": {"a": [0.125, 0.4, 0.475, 0.06], "b": [1, 3, -0.5, 4]})";
  text += R"(
    }
  }
})";
  return text;
}

// Written once, shared across cases.
struct Fixtures {
  std::string fig3 = tmp("fig3.json");
  std::string hom = tmp("hom.json");
  std::string het = tmp("het.json");
  std::string pass = tmp("classic_pass.json");
  std::string fail = tmp("classic_fail.json");
  std::string general = tmp("general.json");

  Fixtures() {
    write_file(fig3, dgd_config("0.101", "0.051"));
    write_file(hom, dgd_config("0.35", "0.025"));
    write_file(het, dgd_config("[1.05, 0.35, 0.35, 0.35]",
                               "[0.075, 0.025, 0.025, 0.025]"));
    write_file(pass, dgd_config("0.3", "0.7", false));
    write_file(fail, dgd_config("0.35", "0.7", false));
    write_file(general, R"({
  "model": {
    "general": {
      "agents": [{
        "A": [[0.5]], "B": [[0]], "G": [[0]],
        "C_con": [[1]], "D_con": [[0]], "H_con": [[0]],
        "C_opt": [[1]], "D_opt": [[0]], "H_opt": [[0]],
        "sector": {"mu": 0.05, "K": 1.0}
      }],
      "M": [[0]]
    }
  }
})");
  }
};

const Fixtures& fixtures() {
  static Fixtures f;
  return f;
}

}  // namespace

TEST_CASE("certify --sublinear round-trips through the verifier") {
  const Fixtures& fx = fixtures();
  std::string cert = tmp("fig3.cert");
  CliResult r = run({"certify", fx.fig3, "--sublinear", "--out", cert});
  CHECK(r.code == 0);
  CHECK(r.out.find("status: certified") != std::string::npos);
  CHECK(r.out.find("sublinear") != std::string::npos);
  CHECK(r.out.find("detectable") != std::string::npos);
  CHECK(fs::exists(cert));

  CliResult v = run({"verify", cert, fx.fig3});
  CHECK(v.code == 0);
  CHECK(v.out.find("verified") != std::string::npos);

  // The same certificate must not verify against a different model.
  std::string other = tmp("fig3b.json");
  write_file(other, dgd_config("0.102", "0.051"));
  CliResult bad = run({"verify", cert, other});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("fingerprint mismatch") != std::string::npos);

  // Nor after tampering with a witness value.
  std::string tampered = tmp("fig3_tampered.cert");
  std::string text = read_file(cert);
  std::size_t at = text.find("\nP 0 0 0 ");
  REQUIRE(at != std::string::npos);
  text.insert(at + 9, "9");
  write_file(tampered, text);
  CliResult tam = run({"verify", tampered, fx.fig3});
  CHECK(tam.code == 1);
}

TEST_CASE("certify --bisect reports a rate and round-trips") {
  const Fixtures& fx = fixtures();
  std::string cert = tmp("fig3_rate.cert");
  CliResult r = run({"certify", fx.fig3, "--bisect", "--out", cert});
  CHECK(r.code == 0);
  CHECK(r.out.find("gamma* = ") != std::string::npos);
  CHECK(r.out.find("rate gamma:") != std::string::npos);
  CHECK(run({"verify", cert, fx.fig3}).code == 0);
}

TEST_CASE("certify --gamma works on the general model form") {
  const Fixtures& fx = fixtures();
  std::string cert = tmp("general.cert");
  CliResult r = run({"certify", fx.general, "--gamma", "0.5", "--out", cert});
  CHECK(r.code == 0);
  CHECK(r.out.find("rate gamma: 0.5") != std::string::npos);
  CHECK(run({"verify", cert, fx.general}).code == 0);
}

TEST_CASE("certify usage and failure exit codes") {
  const Fixtures& fx = fixtures();
  CHECK(run({"certify", fx.fig3}).code == 2);  // no mode chosen
  CHECK(run({"certify", fx.fig3, "--gamma", "0.5", "--sublinear"}).code == 2);
  CHECK(run({"certify", tmp("missing.json"), "--sublinear"}).code == 2);

  std::string broken = tmp("broken.json");
  write_file(broken, "{\"model\":");
  CHECK(run({"certify", broken, "--sublinear"}).code == 2);

  // Far corner of the step-size grid: outcome recorded, not asserted.
  std::string far = tmp("far.json");
  write_file(far, dgd_config("1.4", "1.95"));
  CliResult r = run({"certify", far, "--sublinear", "--out", tmp("far.cert")});
  CHECK((r.code == 0 || r.code == 1));
  MESSAGE("far-corner cell (1.4, 1.95): exit " << r.code);

  // A rate outside (0, 1) is a usage error.
  CHECK(run({"certify", fx.fig3, "--gamma", "1.5"}).code == 2);

  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"certify", "--frobnicate"}).code == 2);
}

TEST_CASE("grid sweeps write stable CSV and SVG files") {
  const Fixtures& fx = fixtures();
  std::string prefix = tmp("eta_sweep");
  CliResult r = run({"grid", fx.hom, "--axis", "eta=0.001:0.126:0.025",
                     "--out", prefix, "--seed", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("6 cells") != std::string::npos);

  std::string csv = read_file(prefix + ".csv");
  CHECK(csv.rfind("eta,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
  std::string svg = read_file(prefix + ".svg");
  CHECK(svg.find("<svg") != std::string::npos);

  CliResult again = run({"grid", fx.hom, "--axis", "eta=0.001:0.126:0.025",
                         "--out", tmp("eta_sweep2"), "--seed", "5"});
  CHECK(again.code == 0);
  CHECK(read_file(tmp("eta_sweep2") + ".csv") == csv);  // byte-identical rerun
  CHECK(read_file(tmp("eta_sweep2") + ".svg") == svg);
}

TEST_CASE("grid handles per-agent axes and rejects bad specs") {
  const Fixtures& fx = fixtures();
  std::string prefix = tmp("agent1");
  CliResult r = run({"grid", fx.hom, "--axis", "rho1=1.05:1.05:1", "--axis",
                     "eta1=0.025:0.075:0.05", "--out", prefix});
  CHECK(r.code == 0);
  std::string csv = read_file(prefix + ".csv");
  CHECK(csv.rfind("rho1,eta1,", 0) == 0);
  // The heterogeneous cell (rho1 = 1.05, eta1 = 0.075) certifies even though
  // the classical rules cannot apply.
  CHECK(csv.find("1.05,0.075,0,1,") != std::string::npos);

  CHECK(run({"grid", fx.hom, "--axis", "sigma", "--out", tmp("x")}).code == 2);
  CHECK(run({"grid", fx.hom, "--axis", "eta=2:1:0.5", "--out", tmp("x")}).code == 2);
  CHECK(run({"grid", fx.hom, "--axis", "eta=0:1:-0.5", "--out", tmp("x")}).code == 2);
  CHECK(run({"grid", fx.general, "--out", tmp("x")}).code == 2);
  CHECK(run({"grid", fx.hom, "--out", "/nonexistent/dir/x"}).code == 2);
}

TEST_CASE("simulate compares two configs and reruns byte-identically") {
  const Fixtures& fx = fixtures();
  std::string prefix = tmp("sim");
  CliResult r = run({"simulate", fx.hom, "--runs", "20", "--steps", "30",
                     "--seed", "7", "--compare", fx.het, "--out", prefix});
  CHECK(r.code == 0);
  CHECK(r.out.find("hom:") != std::string::npos);
  CHECK(r.out.find("het:") != std::string::npos);

  std::string csv = read_file(prefix + ".csv");
  CHECK(csv.rfind("step,hom,het", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);  // header + 31 steps

  CliResult again = run({"simulate", fx.hom, "--runs", "20", "--steps", "30",
                         "--seed", "7", "--compare", fx.het, "--out",
                         tmp("sim2")});
  CHECK(again.code == 0);
  CHECK(read_file(tmp("sim2") + ".csv") == csv);

  CliResult zero = run({"simulate", fx.hom, "--runs", "3", "--steps", "0",
                        "--out", tmp("sim0")});
  CHECK(zero.code == 0);
  std::string zero_csv = read_file(tmp("sim0") + ".csv");
  CHECK(std::count(zero_csv.begin(), zero_csv.end(), '\n') == 2);

  // No costs means nothing to simulate.
  CHECK(run({"simulate", fixtures().pass, "--runs", "2", "--steps", "2",
             "--out", tmp("simx")}).code == 2);
}

TEST_CASE("classic prints the textbook bounds and grades them") {
  const Fixtures& fx = fixtures();
  CliResult ok = run({"classic", fx.pass});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("max degree: 3") != std::string::npos);
  CHECK(ok.out.find("lambda_max(L): 4") != std::string::npos);
  CHECK(ok.out.find("0.8") != std::string::npos);
  CHECK(ok.out.find("pass") != std::string::npos);

  CliResult bad = run({"classic", fx.fail});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("fail") != std::string::npos);

  CliResult het = run({"classic", fx.het});
  CHECK(het.code == 2);
  CHECK(het.err.find("error:") != std::string::npos);
}

TEST_CASE("export-sdp writes the documented problem form") {
  const Fixtures& fx = fixtures();
  std::string out = tmp("fig3.dat-s");
  CliResult r = run({"export-sdp", fx.fig3, "--strict", "--out", out});
  CHECK(r.code == 0);
  std::string text = read_file(out);
  CHECK(text.rfind("*", 0) == 0);  // leading comment lines
  CHECK(text.find("x_1") != std::string::npos);
  CHECK(run({"export-sdp", fx.fig3, "--gamma", "0.9", "--out",
             tmp("fig3_09.dat-s")}).code == 0);
}
