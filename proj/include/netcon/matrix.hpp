#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "netcon/errors.hpp"

namespace netcon {

// Dense row-major matrix. Everything in this project is small (a few dozen
// rows at most), so no attempt is made at blocking or sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[std::size_t(r) * cols_ + c];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transposed() const;
  bool all_finite() const;
  double max_abs() const;
  double fro_norm() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, const std::vector<double>& x);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double nrm2(const std::vector<double>& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
std::string to_string(const Matrix& m);

// Symmetric matrix. Construction symmetrizes, so entry (i,j) and (j,i) are
// bitwise identical from then on; mutators write both triangles.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim) : m_(dim, dim) {}
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix symmetrized(const Matrix& m);  // (m + m^T)/2
  static SymMatrix identity(int dim);
  static SymMatrix scaled_identity(int dim, double s);

  int dim() const { return m_.rows(); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v) { m_(i, j) = m_(j, i) = v; }
  void add(int i, int j, double v) {
    if (i == j) {
      m_(i, i) += v;
    } else {
      double w = m_(i, j) + v;
      m_(i, j) = m_(j, i) = w;
    }
  }

  const Matrix& full() const { return m_; }
  bool all_finite() const { return m_.all_finite(); }
  double fro_norm() const { return m_.fro_norm(); }
  double max_abs() const { return m_.max_abs(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;

  friend SymMatrix congruence(const Matrix& g, const SymMatrix& s);
  friend SymMatrix kron(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix block_diag(const std::vector<SymMatrix>& blocks);
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

// g^T s g, re-symmetrized so the result satisfies the exact-symmetry
// invariant despite floating point.
SymMatrix congruence(const Matrix& g, const SymMatrix& s);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi sweeps; deterministic rotation order, so repeated calls give
// bitwise-identical output. Throws InvalidMatrix on non-finite input.
EigenDecomposition sym_eigen(const SymMatrix& m);
std::vector<double> sym_eigenvalues(const SymMatrix& m);

// True iff the smallest eigenvalue is >= margin. Negative margins accept
// slightly indefinite matrices; positive margins demand strictness.
bool is_psd(const SymMatrix& m, double margin = 0.0);

Matrix kron(const Matrix& a, const Matrix& b);
SymMatrix kron(const SymMatrix& a, const SymMatrix& b);

Matrix block_diag(const std::vector<Matrix>& blocks);
SymMatrix block_diag(const std::vector<SymMatrix>& blocks);

// LU with partial pivoting. Factor once, solve many.
class LuFactors {
 public:
  static LuFactors factor(Matrix a);

  // Pivot ratio test; callers pick the tolerance that matches their contract.
  bool singular(double rel_tol = 1e-14) const;
  double min_pivot() const;
  double max_pivot() const;

  std::vector<double> solve(std::vector<double> b) const;
  Matrix solve(const Matrix& b) const;

 private:
  LuFactors() = default;
  Matrix lu_;
  std::vector<int> perm_;
  double scale_ = 0.0;  // max abs of the original matrix
};

// Eigenvalues of a general square matrix: balance, reduce to Hessenberg,
// then shifted QR. Sorted by (real, imag) for determinism.
std::vector<std::complex<double>> general_eigenvalues(Matrix a);

std::vector<double> singular_values(const Matrix& a);  // descending
int numeric_rank(const Matrix& a, double tol);
double condition_number(const Matrix& a);  // 2-norm; inf when rank deficient

}  // namespace netcon
