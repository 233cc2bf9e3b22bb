#ifndef DECOPT_LINALG_HPP
#define DECOPT_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace decopt {

using Vec = std::vector<double>;

// Dense row-major matrix. Dimensions are fixed at desk scale (m <= ~512,
// n <= ~few hundred); no sparse machinery.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return d_[i * cols_ + j];
  }

  double* row(std::size_t i) { return d_.data() + i * cols_; }
  const double* row(std::size_t i) const { return d_.data() + i * cols_; }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> d_;
};

// --- vector helpers ---

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, Vec& x) {
  for (double& v : x) v *= alpha;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(double alpha, const Vec& a) {
  Vec r(a);
  scale(alpha, r);
  return r;
}

namespace kernels {

// C = A * B, serial reference.
void mat_mat_serial(const Matrix& A, const Matrix& B, Matrix& C);

// C = A * B, OpenMP over rows of C. Per-row accumulation order matches
// the serial kernel, so results are bit-identical.
void mat_mat(const Matrix& A, const Matrix& B, Matrix& C);

// y = A * x, serial reference and OpenMP variant (same bit-exactness
// contract as mat_mat).
void mat_vec_serial(const Matrix& A, const Vec& x, Vec& y);
void mat_vec(const Matrix& A, const Vec& x, Vec& y);

}  // namespace kernels

// Column means of an m x n matrix (row k = node k's vector).
Vec column_means(const Matrix& X);

}  // namespace decopt

#endif
