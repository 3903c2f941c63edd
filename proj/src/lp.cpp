#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "netcon/errors.hpp"

namespace netcon {

namespace {

constexpr double kPriceTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kDegenerateStep = 1e-13;
constexpr int kMaxPivots = 5000;

}  // namespace

CuttingPlaneLp::CuttingPlaneLp(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidParameter("lp dimension must be positive");
}

int CuttingPlaneLp::add_row(std::vector<double> r, double b, bool permanent) {
  if (int(r.size()) != dim_) throw DimensionMismatch("lp row size");
  double s = 0.0;
  for (double v : r) s = std::max(s, std::abs(v));
  if (!(s > 0.0)) throw InvalidParameter("lp row is identically zero");
  if (s != 1.0) {
    for (double& v : r) v /= s;
    b /= s;
  }
  rows_.push_back(Row{std::move(r), b, permanent, true});
  return int(rows_.size()) - 1;
}

void CuttingPlaneLp::prune(std::size_t max_rows) {
  std::size_t alive = 0;
  for (const Row& row : rows_)
    if (row.alive) ++alive;
  if (alive <= max_rows) return;
  std::vector<char> basic(rows_.size(), 0);
  for (int id : basis_) basic[std::size_t(id)] = 1;
  for (std::size_t i = 0; i < rows_.size() && alive > max_rows; ++i) {
    Row& row = rows_[i];
    if (!row.alive || row.permanent || basic[i]) continue;
    row.alive = false;
    row.r.clear();
    row.r.shrink_to_fit();
    --alive;
  }
}

CuttingPlaneLp::Solution CuttingPlaneLp::solve() {
  const std::size_t m = rows_.size();
  if (m < std::size_t(dim_)) throw SolverError("lp needs at least dim rows");
  if (basis_.empty()) {
    // The caller seeds the problem with dim structurally independent rows
    // (box faces plus the t cap) before the first solve.
    basis_.resize(std::size_t(dim_));
    for (int i = 0; i < dim_; ++i) basis_[std::size_t(i)] = i;
  }

  auto basis_matrix = [&]() {
    Matrix mb(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      const Row& row = rows_[std::size_t(basis_[std::size_t(j)])];
      for (int i = 0; i < dim_; ++i) mb(i, j) = row.r[std::size_t(i)];
    }
    return mb;
  };

  std::vector<double> e_t(std::size_t(dim_), 0.0);
  e_t.back() = 1.0;

  Matrix mb = basis_matrix();
  LuFactors lu = LuFactors::factor(mb);
  std::vector<double> y = lu.solve(e_t);
  double ymin = *std::min_element(y.begin(), y.end());
  if (ymin < -1e-7) {
    // Warm basis went stale (can happen after aggressive pruning churn);
    // restart from the structural rows.
    for (int i = 0; i < dim_; ++i) basis_[std::size_t(i)] = i;
    mb = basis_matrix();
    lu = LuFactors::factor(mb);
    y = lu.solve(e_t);
    ymin = *std::min_element(y.begin(), y.end());
    if (ymin < -1e-7) throw SolverError("lp initial basis infeasible");
  }
  for (double& v : y) v = std::max(v, 0.0);

  int degenerate_run = 0;
  bool bland = false;
  for (int pivot = 0; pivot < kMaxPivots; ++pivot) {
    std::vector<double> cb(std::size_t(dim_), 0.0);
    for (int j = 0; j < dim_; ++j) cb[std::size_t(j)] = rows_[std::size_t(basis_[std::size_t(j)])].b;
    LuFactors lut = LuFactors::factor(mb.transposed());
    std::vector<double> pi = lut.solve(cb);

    double pi_scale = 1.0;
    for (double v : pi) pi_scale = std::max(pi_scale, std::abs(v));
    const double tol = kPriceTol * pi_scale;

    int enter = -1;
    double best_rc = -tol;
    for (std::size_t i = 0; i < m; ++i) {
      const Row& row = rows_[i];
      if (!row.alive) continue;
      double rc = row.b - dot(row.r, pi);
      if (rc < best_rc) {
        enter = int(i);
        best_rc = rc;
        if (bland) break;  // first eligible column
      }
    }
    if (enter < 0) {
      Solution sol;
      sol.z = std::move(pi);
      sol.value = sol.z.back();
      return sol;
    }

    std::vector<double> w = lu.solve(rows_[std::size_t(enter)].r);
    int leave = -1;
    double theta = 0.0;
    for (int j = 0; j < dim_; ++j) {
      double wj = w[std::size_t(j)];
      if (wj <= kPivotTol) continue;
      double ratio = y[std::size_t(j)] / wj;
      if (leave < 0 || ratio < theta - 1e-15 ||
          (ratio < theta + 1e-15 && basis_[std::size_t(j)] < basis_[std::size_t(leave)])) {
        leave = j;
        theta = ratio;
      }
    }
    if (leave < 0) throw SolverError("lp ratio test failed (unbounded dual)");

    for (int j = 0; j < dim_; ++j)
      y[std::size_t(j)] = std::max(0.0, y[std::size_t(j)] - theta * w[std::size_t(j)]);
    y[std::size_t(leave)] = theta;
    basis_[std::size_t(leave)] = enter;
    mb = basis_matrix();
    lu = LuFactors::factor(mb);

    if (theta <= kDegenerateStep) {
      if (++degenerate_run > 40) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
  throw SolverError("lp pivot limit reached");
}

}  // namespace netcon
