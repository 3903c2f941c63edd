#pragma once

#include <iosfwd>
#include <vector>

#include "netcon/certify.hpp"

namespace netcon {

// One row per cell: axis values, classical_ok, sublinear, gamma_star (empty
// when absent), margin, note. Deterministic formatting.
void write_grid_csv(std::ostream& os, const GridReport& report);

// Self-contained heat map for one- or two-axis grids: blue cells are
// certified, a translucent gray overlay marks where the classical step-size
// rules hold. First axis runs left to right, second bottom to top.
void write_grid_svg(std::ostream& os, const GridReport& report);

// Line plot of per-step series (e.g. mean log error curves); one CSV column
// or one polyline per labeled series.
struct Series {
  std::string label;
  std::vector<double> values;
};

void write_series_csv(std::ostream& os, const std::vector<Series>& series);
void write_series_svg(std::ostream& os, const std::vector<Series>& series,
                      const std::string& y_label);

}  // namespace netcon
