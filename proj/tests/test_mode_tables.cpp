#include <doctest.h>

#include <cmath>
#include <vector>

#include "modeguide/geometry.hpp"
#include "modeguide/mode_tables.hpp"
#include "modeguide/quadrature.hpp"

using namespace modeguide;

namespace {

// Overlaps of y^{-1/2} T_i(2y/pi - 1) with sqrt(2/pi) sin(jy) and sqrt(2/pi) cos((m-1/2)y),
// by composite Simpson in s with y = pi s^2.
struct Brute {
  std::vector<std::vector<double>> A, B;  // [i][j-1]
};

Brute brute_overlaps(int N, int M, int nodes) {
  Brute b;
  b.A.assign(N, std::vector<double>(M, 0.0));
  b.B.assign(N, std::vector<double>(M, 0.0));
  const double h = 1.0 / nodes;
  std::vector<double> sj(M), cm(M), T(N);
  for (int k = 0; k <= nodes; ++k) {
    const double s = k * h;
    const double w = ((k == 0 || k == nodes) ? 1.0 : (k % 2 ? 4.0 : 2.0)) * h / 3.0 * 2.0 * std::sqrt(2.0);
    const double th = kPi * s * s;
    for (int j = 1; j <= M; ++j) {
      sj[j - 1] = std::sin(j * th);
      cm[j - 1] = std::cos((j - 0.5) * th);
    }
    for (int i = 0; i < N; ++i) T[i] = std::cos(2.0 * i * std::acos(std::min(1.0, s)));
    for (int i = 0; i < N; ++i) {
      const double f = w * T[i];
      for (int j = 0; j < M; ++j) {
        b.A[i][j] += f * sj[j];
        b.B[i][j] += f * cm[j];
      }
    }
  }
  return b;
}

}  // namespace

TEST_CASE("even Chebyshev values") {
  double v[6];
  for (double s : {0.0, 0.3, 0.77, 1.0}) {
    even_chebyshev(6, s, v);
    for (int i = 0; i < 6; ++i) CHECK(v[i] == doctest::Approx(std::cos(2 * i * std::acos(s))).epsilon(1e-13));
  }
}

TEST_CASE("overlap tables against brute-force quadrature") {
  const int N = 5, J = 48;
  const auto t = build_mode_table(N, J);
  REQUIRE(t->A.rows() == N);
  REQUIRE(t->A.cols() == J);
  const Brute b = brute_overlaps(N, J, 40000);
  double worst = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < J; ++j) {
      worst = std::max(worst, std::abs(t->A(i, j) - b.A[i][j]));
      worst = std::max(worst, std::abs(t->B(i, j) - b.B[i][j]));
    }
  CHECK(worst < 1e-10);
  for (int i = 0; i < N; ++i) CHECK(t->P0[i] == (i % 2 ? -1.0 : 1.0));
}

TEST_CASE("baseline Gram against truncated mode sums with asymptotic tail") {
  const int N = 4, M = 1500;
  const auto t = build_mode_table(N, 64);
  const Brute b = brute_overlaps(N, M, 150000);
  // A_ij ~ P0_i j^{-1/2}, B_im ~ P0_i (m - 1/2)^{-1/2}
  const double tail = hurwitz_zeta(2.0, M + 1.0) + hurwitz_zeta(2.0, M + 0.5);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      double s = 0;
      for (int j = 1; j <= M; ++j) s += b.A[i][j - 1] * b.A[k][j - 1] / j + b.B[i][j - 1] * b.B[k][j - 1] / (j - 0.5);
      s += t->P0[i] * t->P0[k] * tail;
      CHECK(t->Y0(i, k) == doctest::Approx(s).epsilon(2e-6));
      CHECK(t->Y0(i, k) == t->Y0(k, i));
    }
}

TEST_CASE("table cache returns one instance per size") {
  const auto a = mode_table(6, 32);
  const auto b = mode_table(6, 32);
  const auto c = mode_table(6, 40);
  CHECK(a.get() == b.get());
  CHECK(a.get() != c.get());
  CHECK(a->A.isApprox(c->A.leftCols(32), 1e-14));
}
