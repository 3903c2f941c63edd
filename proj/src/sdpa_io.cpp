#include "netcon/sdpa_io.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace netcon {

void write_sdp_problem(std::ostream& os, const LmiProgram& prog, double box_bound) {
  if (!(box_bound > 0.0)) throw InvalidParameter("box bound must be positive");
  const int d = int(prog.variables.size());
  const int m = d + 1;  // slack t is the last variable

  os << "* LMI feasibility in max-slack form: minimize -x_" << m
     << " subject to sum_i x_i F_i - F_0 >= 0 per block\n";
  for (int k = 0; k < d; ++k)
    os << "* x_" << (k + 1) << " = " << to_string(prog.variables[std::size_t(k)]) << "\n";
  os << "* x_" << m << " = t (min-eigenvalue slack)\n";

  std::vector<AffineLmi> cons;
  cons.reserve(prog.constraints.size());
  for (const AffineLmi& raw : prog.constraints) cons.push_back(solver_form(raw));

  os << m << " = mDIM\n";
  os << (cons.size() + 1) << " = nBLOCK\n";
  for (const AffineLmi& c : cons) os << c.dim << " ";
  os << -(2 * d) << " = bLOCKsTRUCT\n";
  for (int k = 0; k < d; ++k) os << "0 ";
  os << "-1\n";

  os.precision(17);
  auto entry = [&](int mat, int blk, int i, int j, double v) {
    if (v == 0.0) return;
    os << mat << " " << blk << " " << i << " " << j << " " << v << "\n";
  };

  std::vector<char> nonneg(std::size_t(d), 0);
  for (int idx : prog.nonneg) nonneg[std::size_t(idx)] = 1;

  for (std::size_t b = 0; b < cons.size(); ++b) {
    const AffineLmi& c = cons[b];
    const int blk = int(b) + 1;
    for (int i = 0; i < c.dim; ++i)
      for (int j = i; j < c.dim; ++j) entry(0, blk, i + 1, j + 1, -c.constant(i, j));
    for (const auto& [var, coeff] : c.terms) {
      const int mat = prog.var_position(var) + 1;
      for (int i = 0; i < c.dim; ++i)
        for (int j = i; j < c.dim; ++j) entry(mat, blk, i + 1, j + 1, coeff(i, j));
    }
    for (int i = 1; i <= c.dim; ++i) entry(m, blk, i, i, -1.0);
  }

  // Diagonal box block: slot 2k-1 carries B - x_k >= 0, slot 2k carries
  // x_k - lower >= 0 (lower is 0 for the nonnegative variables).
  const int box_blk = int(cons.size()) + 1;
  for (int k = 0; k < d; ++k) {
    entry(0, box_blk, 2 * k + 1, 2 * k + 1, box_bound);
    entry(k + 1, box_blk, 2 * k + 1, 2 * k + 1, -1.0);
    entry(0, box_blk, 2 * k + 2, 2 * k + 2, nonneg[std::size_t(k)] ? 0.0 : -box_bound);
    entry(k + 1, box_blk, 2 * k + 2, 2 * k + 2, 1.0);
  }
}

FeasibilityResult import_external_result(std::istream& is, const LmiProgram& prog,
                                         const SolveOptions& opts) {
  const std::size_t d = prog.variables.size();
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '#')) continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw ConfigError("unparsable token '" + tok + "'");
        values.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("unparsable token '" + tok + "' in external result");
      }
    }
  }
  if (values.size() != d && values.size() != d + 1)
    throw ConfigError("external result has " + std::to_string(values.size()) +
                      " values, expected " + std::to_string(d));
  values.resize(d);

  WitnessCheck check = verify_witness(prog, values, kEpsPost, opts.box_bound);
  FeasibilityResult res;
  // No relaxation ran, so there is no certified upper bound to report.
  res.upper_bound = std::numeric_limits<double>::infinity();
  res.margin = check.min_margin;
  if (check.ok && check.min_margin > opts.eps) {
    res.status = Feasibility::Feasible;
    res.witness_x = values;
    res.witness = make_assignment(prog, values);
  } else {
    res.status = Feasibility::Undecided;
  }
  return res;
}

}  // namespace netcon
