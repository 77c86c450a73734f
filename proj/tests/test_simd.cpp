#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "modeguide/simd.hpp"

using namespace modeguide;

namespace {
std::vector<double> random_vec(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}
}  // namespace

TEST_CASE("scalar kernels against naive loops") {
  std::mt19937_64 g(7);
  const auto& k = simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 3u, 17u, 64u}) {
    auto x = random_vec(n, g), y = random_vec(n, g);
    double ref = 0;
    for (std::size_t i = 0; i < n; ++i) ref += x[i] * y[i];
    CHECK(k.dot(x.data(), y.data(), n) == doctest::Approx(ref).epsilon(1e-14));
    auto z = y;
    k.axpy(0.5, x.data(), z.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(y[i] + 0.5 * x[i]));
  }
  const std::size_t n = 5, cols = 7;
  auto A = random_vec(n * cols, g), w = random_vec(cols, g);
  std::vector<double> G(n * n, 0.0);
  k.weighted_gram(A.data(), n, n, cols, w.data(), G.data(), n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double ref = 0;
      for (std::size_t j = 0; j < cols; ++j) ref += w[j] * A[j * n + r] * A[j * n + c];
      CHECK(G[c * n + r] == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("AVX2 kernels agree with scalar kernels") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v || !simd::cpu_has_avx2()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  const auto& s = simd::scalar_kernels();
  std::mt19937_64 g(11);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 40u, 81u}) {
    auto x = random_vec(n, g), y = random_vec(n, g);
    const double a = s.dot(x.data(), y.data(), n), b = v->dot(x.data(), y.data(), n);
    CHECK(std::abs(a - b) <= 1e-14 * n);
    auto z1 = y, z2 = y;
    s.axpy(-1.25, x.data(), z1.data(), n);
    v->axpy(-1.25, x.data(), z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) <= 1e-15);
    for (std::size_t cols : {1u, 2u, 5u, 64u}) {
      const std::size_t lda = n + 3;
      auto A = random_vec(lda * cols, g), w = random_vec(cols, g);
      std::vector<double> G1(n * n, 0.25), G2(n * n, 0.25);
      s.weighted_gram(A.data(), lda, n, cols, w.data(), G1.data(), n);
      v->weighted_gram(A.data(), lda, n, cols, w.data(), G2.data(), n);
      for (std::size_t i = 0; i < n * n; ++i) CHECK(std::abs(G1[i] - G2[i]) <= 1e-13 * cols);
    }
  }
}

TEST_CASE("dispatch can be forced") {
  const simd::Backend before = simd::active_backend();
  simd::force_backend(simd::Backend::Scalar);
  CHECK(simd::active_backend() == simd::Backend::Scalar);
  CHECK(simd::kernels().dot == simd::scalar_kernels().dot);
  CHECK(simd::backend_name(simd::Backend::Scalar) == "scalar");
  simd::force_backend(before);
  CHECK(simd::active_backend() == before);
}
