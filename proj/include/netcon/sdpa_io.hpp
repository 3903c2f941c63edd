#pragma once

#include <iosfwd>

#include "netcon/sdp.hpp"

namespace netcon {

// Exports the max-slack form of an LmiProgram as an SDPA sparse problem
// (.dat-s dialect): variables x_1..x_d are the program variables in
// declaration order, x_{d+1} is the slack t, and the objective minimizes -t.
// Each constraint becomes one block; box bounds land in a trailing diagonal
// block. Comment lines map columns back to variable names.
void write_sdp_problem(std::ostream& os, const LmiProgram& prog,
                       double box_bound = 1e4);

// Reads a solution produced by an external solver: whitespace-separated
// values for x_1..x_d (a trailing t value is accepted and ignored), '*' or
// '#' comment lines allowed. The witness goes through the same verification
// gate as the built-in engine; a value set that fails the gate comes back
// Undecided, never Infeasible. Malformed input throws ConfigError.
FeasibilityResult import_external_result(std::istream& is,
                                         const LmiProgram& prog,
                                         const SolveOptions& opts = {});

}  // namespace netcon
