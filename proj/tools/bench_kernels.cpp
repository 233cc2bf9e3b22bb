// Compares the OpenMP row-parallel kernels against the serial reference
// and checks they agree bit-for-bit.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "decopt/linalg.hpp"
#include "decopt/rng.hpp"

using namespace decopt;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, RngStream& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

template <typename F>
double time_ms(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  RngStream rng(42);
  std::printf("%8s %12s %12s %8s %10s\n", "size", "serial_ms", "openmp_ms",
              "speedup", "bit_equal");
  bool all_equal = true;
  for (std::size_t n : {64, 128, 256, 512, 1024}) {
    const Matrix A = random_matrix(n, n, rng);
    const Matrix B = random_matrix(n, n, rng);
    Matrix Cs(n, n), Cp(n, n);
    const int reps = n <= 256 ? 20 : 5;
    const double ts = time_ms([&] { kernels::mat_mat_serial(A, B, Cs); }, reps);
    const double tp = time_ms([&] { kernels::mat_mat(A, B, Cp); }, reps);
    const bool equal = std::memcmp(Cs.data(), Cp.data(),
                                   n * n * sizeof(double)) == 0;
    all_equal = all_equal && equal;
    std::printf("%8zu %12.3f %12.3f %7.2fx %10s\n", n, ts, tp, ts / tp,
                equal ? "yes" : "NO");
  }
  return all_equal ? 0 : 1;
}
