#include <immintrin.h>

#include "modeguide/simd.hpp"

namespace modeguide::simd {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// two columns of A per pass halves the traffic on G
void weighted_gram_avx2(const double* A, std::size_t lda, std::size_t n, std::size_t cols,
                        const double* w, double* G, std::size_t ldg) {
  std::size_t j = 0;
  for (; j + 2 <= cols; j += 2) {
    const double* a0 = A + j * lda;
    const double* a1 = A + (j + 1) * lda;
    const double w0 = w[j], w1 = w[j + 1];
    for (std::size_t k = 0; k < n; ++k) {
      const __m256d s0 = _mm256_set1_pd(w0 * a0[k]);
      const __m256d s1 = _mm256_set1_pd(w1 * a1[k]);
      double* g = G + k * ldg;
      std::size_t i = 0;
      for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(g + i);
        acc = _mm256_fmadd_pd(s0, _mm256_loadu_pd(a0 + i), acc);
        acc = _mm256_fmadd_pd(s1, _mm256_loadu_pd(a1 + i), acc);
        _mm256_storeu_pd(g + i, acc);
      }
      for (; i < n; ++i) g[i] += w0 * a0[k] * a0[i] + w1 * a1[k] * a1[i];
    }
  }
  for (; j < cols; ++j) {
    const double* a0 = A + j * lda;
    for (std::size_t k = 0; k < n; ++k) {
      const double s = w[j] * a0[k];
      double* g = G + k * ldg;
      for (std::size_t i = 0; i < n; ++i) g[i] += s * a0[i];
    }
  }
}

const KernelTable kAvx2{dot_avx2, axpy_avx2, weighted_gram_avx2};

}  // namespace

const KernelTable* avx2_kernels_impl() { return &kAvx2; }

}  // namespace modeguide::simd
