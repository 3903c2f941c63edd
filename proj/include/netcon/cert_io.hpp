#pragma once

#include <iosfwd>

#include "netcon/certify.hpp"

namespace netcon {

// Plain-text certificate: header, scalar fields, per-constraint margins,
// then one "kind agent a b value" line per witness variable. Values use 17
// significant digits, so write/read round-trips are exact.
void write_certificate(std::ostream& os, const Certificate& cert);

// Throws ConfigError on malformed input. witness_x is left empty; rebuild it
// against a program with assignment_vector when re-verifying.
Certificate read_certificate(std::istream& is);

}  // namespace netcon
