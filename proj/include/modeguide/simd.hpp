#pragma once

#include <cstddef>
#include <string>

namespace modeguide::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // G(n x n, column-major, ldg) += sum_j w[j] * A(:,j) A(:,j)^T, A column-major with lda
  void (*weighted_gram)(const double* A, std::size_t lda, std::size_t n, std::size_t cols,
                        const double* w, double* G, std::size_t ldg);
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

// Picks AVX2 when compiled and supported, unless MODEGUIDE_SIMD=scalar.
Backend active_backend();
void force_backend(Backend b);
std::string backend_name(Backend b);
const KernelTable& kernels();

inline double dot(const double* x, const double* y, std::size_t n) { return kernels().dot(x, y, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  kernels().axpy(alpha, x, y, n);
}
inline void weighted_gram(const double* A, std::size_t lda, std::size_t n, std::size_t cols,
                          const double* w, double* G, std::size_t ldg) {
  kernels().weighted_gram(A, lda, n, cols, w, G, ldg);
}

}  // namespace modeguide::simd
