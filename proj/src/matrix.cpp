#include "netcon/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

namespace netcon {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(op) + ": shapes differ");
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InvalidParameter("matrix dims negative");
  data_.assign(std::size_t(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw InvalidParameter("matrix dims negative");
  if (data_.size() != std::size_t(rows) * cols)
    throw DimensionMismatch("matrix: entry count does not match dims");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = int(rows.size());
  cols_ = rows_ == 0 ? 0 : int(rows.begin()->size());
  data_.reserve(std::size_t(rows_) * cols_);
  for (const auto& r : rows) {
    if (int(r.size()) != cols_) throw DimensionMismatch("matrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::fro_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dims");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> operator*(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != int(x.size())) throw DimensionMismatch("matvec: inner dims");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os.precision(6);
  for (int i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << (i + 1 == m.rows() ? "]" : "\n");
  }
  return os.str();
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : m_(rows) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("sym: not square");
  *this = symmetrized(m_);
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("sym: not square");
  SymMatrix s(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j)
      s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

SymMatrix SymMatrix::identity(int dim) { return scaled_identity(dim, 1.0); }

SymMatrix SymMatrix::scaled_identity(int dim, double s) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, s);
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }

SymMatrix operator-(SymMatrix a, const SymMatrix& b) {
  SymMatrix c = a;
  c += -1.0 * b;
  return c;
}

SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

SymMatrix congruence(const Matrix& g, const SymMatrix& s) {
  if (g.rows() != s.dim()) throw DimensionMismatch("congruence: dims");
  Matrix t = s.full() * g;        // s g
  Matrix r = g.transposed() * t;  // g^T s g
  // Round-off can break symmetry in the last bit; restore the invariant.
  for (int i = 0; i < r.rows(); ++i)
    for (int j = i + 1; j < r.cols(); ++j)
      r(i, j) = r(j, i) = 0.5 * (r(i, j) + r(j, i));
  return SymMatrix(std::move(r));
}

// ---------------------------------------------------------------------------
// Symmetric eigenvalues: cyclic Jacobi.

EigenDecomposition sym_eigen(const SymMatrix& m) {
  if (!m.all_finite()) throw InvalidMatrix("sym_eigen: non-finite entries");
  int n = m.dim();
  EigenDecomposition out;
  out.vectors = Matrix::identity(n);
  out.values.assign(n, 0.0);
  if (n == 0) return out;

  Matrix a = m.full();
  Matrix& v = out.vectors;
  double tol = 1e-10 * std::max(1.0, m.fro_norm());

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  const int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-3 * tol / double(n)) continue;
        double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (tau >= 0.0)
                       ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                       : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > tol)
    throw SolverError("sym_eigen: jacobi failed to converge");

  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);

  // Ascending sort, eigenvectors permuted alongside.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return out.values[i] < out.values[j];
  });
  std::vector<double> vals(n);
  Matrix vecs(n, n);
  for (int k = 0; k < n; ++k) {
    vals[k] = out.values[idx[k]];
    for (int r = 0; r < n; ++r) vecs(r, k) = v(r, idx[k]);
  }
  out.values = std::move(vals);
  out.vectors = std::move(vecs);
  return out;
}

std::vector<double> sym_eigenvalues(const SymMatrix& m) {
  return sym_eigen(m).values;
}

bool is_psd(const SymMatrix& m, double margin) {
  if (m.dim() == 0) return true;
  auto vals = sym_eigenvalues(m);
  // Computed eigenvalues carry roundoff of order eps times the norm, so an
  // exactly singular PSD matrix can come back with lambda_min ~ -1e-16. Allow
  // that much; the slack stays orders of magnitude below the certification
  // margins used elsewhere (1e-9 at norms up to 1e4).
  double slack = 32.0 * std::numeric_limits<double>::epsilon() *
                 std::max(1.0, m.fro_norm());
  return vals.front() >= margin - slack;
}

// ---------------------------------------------------------------------------
// Kronecker product and block diagonal assembly.

namespace {
constexpr std::int64_t kMaxEntries = std::int64_t(1) << 25;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  std::int64_t r = std::int64_t(a.rows()) * b.rows();
  std::int64_t c = std::int64_t(a.cols()) * b.cols();
  if (r > std::numeric_limits<int>::max() ||
      c > std::numeric_limits<int>::max() || r * c > kMaxEntries)
    throw DimensionOverflow("kron: result too large");
  int kr = int(r), kc = int(c);
  Matrix k(kr, kc);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

SymMatrix kron(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(kron(a.full(), b.full()));
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw EmptyInput("block_diag: no blocks");
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix m(r, c);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(ro + i, co + j) = b(i, j);
    ro += b.rows();
    co += b.cols();
  }
  return m;
}

SymMatrix block_diag(const std::vector<SymMatrix>& blocks) {
  if (blocks.empty()) throw EmptyInput("block_diag: no blocks");
  std::vector<Matrix> full;
  full.reserve(blocks.size());
  for (const auto& b : blocks) full.push_back(b.full());
  return SymMatrix(block_diag(full));
}

// ---------------------------------------------------------------------------
// LU with partial pivoting.

LuFactors LuFactors::factor(Matrix a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("lu: not square");
  if (!a.all_finite()) throw InvalidMatrix("lu: non-finite entries");
  int n = a.rows();
  LuFactors f;
  f.scale_ = a.max_abs();
  f.perm_.resize(n);
  std::iota(f.perm_.begin(), f.perm_.end(), 0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double big = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > big) {
        big = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm_[k], f.perm_[piv]);
    }
    double akk = a(k, k);
    if (akk == 0.0) continue;  // singular; recorded via min_pivot()
    for (int i = k + 1; i < n; ++i) {
      double m = a(i, k) / akk;
      a(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  f.lu_ = std::move(a);
  return f;
}

double LuFactors::min_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lu_.rows(); ++i) m = std::min(m, std::abs(lu_(i, i)));
  return lu_.rows() ? m : 0.0;
}

double LuFactors::max_pivot() const {
  double m = 0.0;
  for (int i = 0; i < lu_.rows(); ++i) m = std::max(m, std::abs(lu_(i, i)));
  return m;
}

bool LuFactors::singular(double rel_tol) const {
  return min_pivot() <= rel_tol * std::max(1.0, scale_);
}

std::vector<double> LuFactors::solve(std::vector<double> b) const {
  int n = lu_.rows();
  if (int(b.size()) != n) throw DimensionMismatch("lu solve: rhs length");
  if (singular(1e-300)) throw SolverError("lu solve: exactly singular");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuFactors::solve(const Matrix& b) const {
  if (b.rows() != lu_.rows()) throw DimensionMismatch("lu solve: rhs rows");
  Matrix x(b.rows(), b.cols());
  std::vector<double> col(b.rows());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    auto sol = solve(col);
    for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

// ---------------------------------------------------------------------------
// General (nonsymmetric) eigenvalues: balance, Hessenberg reduction, then
// Francis double-shift QR. Classic dense path; fine for the small state
// matrices that show up in detectability checks.

namespace {

void balance_in_place(Matrix& a) {
  int n = a.rows();
  const double radix = 2.0, sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        double ginv = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= ginv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void hessenberg_in_place(Matrix& a) {
  int n = a.rows();
  for (int m = 1; m < n - 1; ++m) {
    double x = 0.0;
    int piv = m;
    for (int j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    }
    if (piv != m) {
      for (int j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
      for (int j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x != 0.0) {
      for (int i = m + 1; i < n; ++i) {
        double y = a(i, m - 1);
        if (y == 0.0) continue;
        y /= x;
        a(i, m - 1) = y;
        for (int j = m; j < n; ++j) a(i, j) -= y * a(m, j);
        for (int j = 0; j < n; ++j) a(j, m) += y * a(j, i);
      }
    }
  }
  // Elimination multipliers live below the subdiagonal; QR wants zeros there.
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) a(i, j) = 0.0;
}

std::vector<std::complex<double>> hqr_in_place(Matrix& a) {
  int n = a.rows();
  std::vector<std::complex<double>> wri(n);
  const double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return wri;  // zero matrix

  auto sign_of = [](double mag, double s) {
    return s >= 0.0 ? std::abs(mag) : -std::abs(mag);
  };

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[nn--] = x + t;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wri[nn - 1] = wri[nn] = x + z;
            if (z != 0.0) wri[nn] = x - w / z;
          } else {
            wri[nn] = std::complex<double>(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (its == 30) throw SolverError("general_eigenvalues: no convergence");
          if (its == 10 || its == 20) {
            t += x;
            for (int i = 0; i < nn + 1; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0;
          for (m = nn - 2; m >= l; --m) {
            double z = a(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rr - ss;
            r = a(m + 2, m + 1);
            double sc = std::abs(p) + std::abs(q) + std::abs(r);
            p /= sc;
            q /= sc;
            r /= sc;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(z) * (std::abs(p) + std::abs(a(m - 1, m - 1)) +
                                      std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k + 1 != nn) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            double yy = q / s;
            double zz = r / s;
            q /= p;
            r /= p;
            for (int j = k; j < nn + 1; ++j) {
              double pp = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                pp += r * a(k + 2, j);
                a(k + 2, j) -= pp * zz;
              }
              a(k + 1, j) -= pp * yy;
              a(k, j) -= pp * x;
            }
            int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i < mmin + 1; ++i) {
              double pp = x * a(i, k) + yy * a(i, k + 1);
              if (k + 1 != nn) {
                pp += zz * a(i, k + 2);
                a(i, k + 2) -= pp * r;
              }
              a(i, k + 1) -= pp * q;
              a(i, k) -= pp;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

}  // namespace

std::vector<std::complex<double>> general_eigenvalues(Matrix a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("general_eigenvalues: not square");
  if (!a.all_finite())
    throw InvalidMatrix("general_eigenvalues: non-finite entries");
  int n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(a(0, 0), 0.0)};
  balance_in_place(a);
  hessenberg_in_place(a);
  auto vals = hqr_in_place(a);
  std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return vals;
}

// ---------------------------------------------------------------------------
// Singular values via the symmetric eigenproblem on the Gram matrix. Accuracy
// is sqrt(eps)-limited near zero, which is fine for the rank and conditioning
// thresholds used in this project.

std::vector<double> singular_values(const Matrix& a) {
  if (!a.all_finite()) throw InvalidMatrix("singular_values: non-finite");
  if (a.rows() == 0 || a.cols() == 0) return {};
  bool wide = a.cols() > a.rows();
  Matrix g = wide ? a * a.transposed() : a.transposed() * a;
  auto vals = sym_eigenvalues(SymMatrix::symmetrized(g));
  std::vector<double> sv(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    sv[vals.size() - 1 - i] = std::sqrt(std::max(0.0, vals[i]));
  return sv;
}

int numeric_rank(const Matrix& a, double tol) {
  auto sv = singular_values(a);
  int r = 0;
  for (double s : sv)
    if (s > tol) ++r;
  return r;
}

double condition_number(const Matrix& a) {
  auto sv = singular_values(a);
  if (sv.empty()) return 0.0;
  double lo = sv.back(), hi = sv.front();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace netcon
