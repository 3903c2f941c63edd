#pragma once

#include <vector>

#include "netcon/matrix.hpp"

namespace netcon {

// Master LP of the cutting-plane loop: maximize z[dim-1] (the slack variable
// t) subject to accumulated rows r.z <= b. Solved through the dual in
// standard form (min b'y, sum y_i r_i = e_t, y >= 0) with a revised primal
// simplex; each new cut is one more dual column, so the basis stays feasible
// across add_row calls and re-solves are warm.
class CuttingPlaneLp {
 public:
  explicit CuttingPlaneLp(int dim);

  // permanent rows (box faces, t cap) survive pruning.
  int add_row(std::vector<double> r, double b, bool permanent);

  struct Solution {
    std::vector<double> z;  // primal point, z.back() is the t bound
    double value = 0.0;
  };

  Solution solve();

  // Drop oldest nonbasic cut rows until at most max_rows remain.
  void prune(std::size_t max_rows);

  std::size_t row_count() const { return rows_.size(); }

 private:
  struct Row {
    std::vector<double> r;
    double b = 0.0;
    bool permanent = false;
    bool alive = true;
  };

  int dim_;
  std::vector<Row> rows_;
  std::vector<int> basis_;  // row ids, one per dual equation
};

}  // namespace netcon
