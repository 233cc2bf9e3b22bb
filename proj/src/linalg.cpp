#include "decopt/linalg.hpp"

#include <cassert>

namespace decopt::kernels {

void mat_mat_serial(const Matrix& A, const Matrix& B, Matrix& C) {
  assert(A.cols() == B.rows());
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  C = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = C.row(i);
    const double* ai = A.row(i);
    for (std::size_t l = 0; l < k; ++l) {
      const double a = ai[l];
      const double* bl = B.row(l);
      for (std::size_t j = 0; j < n; ++j) ci[j] += a * bl[j];
    }
  }
}

void mat_mat(const Matrix& A, const Matrix& B, Matrix& C) {
  assert(A.cols() == B.rows());
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  C = Matrix(m, n);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    double* ci = C.row(i);
    const double* ai = A.row(i);
    for (std::size_t l = 0; l < k; ++l) {
      const double a = ai[l];
      const double* bl = B.row(l);
      for (std::size_t j = 0; j < n; ++j) ci[j] += a * bl[j];
    }
  }
}

void mat_vec_serial(const Matrix& A, const Vec& x, Vec& y) {
  assert(A.cols() == x.size());
  y.assign(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* ai = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
}

void mat_vec(const Matrix& A, const Vec& x, Vec& y) {
  assert(A.cols() == x.size());
  y.assign(A.rows(), 0.0);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(A.rows()); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double* ai = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
}

}  // namespace decopt::kernels

namespace decopt {

Vec column_means(const Matrix& X) {
  Vec mean(X.cols(), 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double* xi = X.row(i);
    for (std::size_t j = 0; j < X.cols(); ++j) mean[j] += xi[j];
  }
  const double inv = 1.0 / static_cast<double>(X.rows());
  for (double& v : mean) v *= inv;
  return mean;
}

}  // namespace decopt
