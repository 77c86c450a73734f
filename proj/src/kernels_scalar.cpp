#include "modeguide/simd.hpp"

namespace modeguide::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void weighted_gram_scalar(const double* A, std::size_t lda, std::size_t n, std::size_t cols,
                          const double* w, double* G, std::size_t ldg) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* a = A + j * lda;
    const double wj = w[j];
    if (wj == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const double s = wj * a[k];
      double* g = G + k * ldg;
      for (std::size_t i = 0; i < n; ++i) g[i] += s * a[i];
    }
  }
}

const KernelTable kScalar{dot_scalar, axpy_scalar, weighted_gram_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace modeguide::simd
