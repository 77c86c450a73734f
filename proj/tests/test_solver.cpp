#include <doctest.h>

#include <cmath>
#include <tuple>
#include <utility>
#include <vector>

#include "modeguide/oracle_fd.hpp"
#include "modeguide/quadrature.hpp"
#include "modeguide/solver.hpp"

using namespace modeguide;

namespace {

const Truncation kTr{};

const std::vector<Eigenpair>& single_a1() {
  static const auto v = find_spectrum(1.0, std::nullopt, kTr);
  return v;
}

double laplace_residual(const Eigenpair& p, double x, double y, double h) {
  const double c = eigenfunction_value(p, x, y);
  const double lap = (eigenfunction_value(p, x + h, y) + eigenfunction_value(p, x - h, y) +
                      eigenfunction_value(p, x, y + h) + eigenfunction_value(p, x, y - h) - 4 * c) /
                     (h * h);
  return -lap - p.lambda * c;
}

}  // namespace

TEST_CASE("single window a=1 against the finite-difference oracle") {
  const auto& v = single_a1();
  REQUIRE(v.size() == 1);
  std::vector<double> fd;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    OracleConfig oc;
    oc.h = h;
    oc.L = 17;
    oc.k = 1;
    fd.push_back(oracle_eigenvalues(canonical(1.0, Kind::SingleWindowEven), oc).front());
  }
  const Extrapolation e = refine_and_extrapolate(fd);
  CHECK(v[0].lambda > 0.25);
  CHECK(v[0].lambda < 1.0);
  CHECK(std::abs(v[0].lambda - e.value) < 2e-3);
  CHECK(v[0].gap == doctest::Approx(1.0 - v[0].lambda).epsilon(1e-12));
  CHECK(v[0].residual < 1e-10);
  CHECK_FALSE(v[0].odd);
}

TEST_CASE("eigenfunction satisfies the equation and boundary conditions") {
  const Eigenpair& p = single_a1()[0];
  const double h = 1e-3;
  for (auto [x, y] : {std::pair{0.4, 1.0}, std::pair{2.5, 0.7}, std::pair{1.6, 2.9}, std::pair{0.2, 0.3}}) {
    const double scale = std::abs(eigenfunction_value(p, 0.0, 0.0)) + 1e-3;
    CHECK(std::abs(laplace_residual(p, x, y, h)) < 1e-4 * scale);
  }
  CHECK(eigenfunction_value(p, 0.3, kPi) == 0.0);
  CHECK(eigenfunction_value(p, 2.0, 0.0) == 0.0);
  // Neumann on the window: one-sided derivative of second order
  for (double x : {0.0, 0.5, 0.9}) {
    const double f0 = eigenfunction_value(p, x, 0.0), f1 = eigenfunction_value(p, x, h),
                 f2 = eigenfunction_value(p, x, 2 * h);
    CHECK(std::abs((-3 * f0 + 4 * f1 - f2) / (2 * h)) < 1e-4);
  }
  // evenness in x1
  CHECK(eigenfunction_value(p, -0.7, 1.1) == doctest::Approx(eigenfunction_value(p, 0.7, 1.1)));
}

TEST_CASE("interface continuity") {
  const Eigenpair& p = single_a1()[0];
  for (double y : {0.2, 1.0, 2.5}) {
    const TracePair t = interface_trace(p, true, y);
    CHECK(std::abs(t.left - t.right) < 1e-6 * (std::abs(t.left) + 1e-3));
    const double eps = 1e-6;
    CHECK(eigenfunction_value(p, 1.0 - eps, y) == doctest::Approx(eigenfunction_value(p, 1.0 + eps, y)).epsilon(1e-4));
  }
}

TEST_CASE("normalization against a tensor quadrature of psi^2") {
  const Eigenpair& p = single_a1()[0];
  CHECK(l2_norm(p) == doctest::Approx(1.0).epsilon(1e-12));
  const QuadRule qy = gauss_legendre(48, 0.0, kPi);
  double s = 0;
  // [0, 1] window column, [1, 41] outside, doubled for x1 < 0
  for (auto [lo, hi, n] : {std::tuple{0.0, 1.0, 48}, std::tuple{1.0, 6.0, 64}, std::tuple{6.0, 41.0, 96}}) {
    const QuadRule qx = gauss_legendre(n, lo, hi);
    for (size_t i = 0; i < qx.x.size(); ++i)
      for (size_t k = 0; k < qy.x.size(); ++k) {
        const double v = eigenfunction_value(p, qx.x[i], qy.x[k]);
        s += qx.w[i] * qy.w[k] * v * v;
      }
  }
  CHECK(2 * s == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("window integral identity and quadrature order") {
  for (double a : {1.0, 2.0}) {
    const auto v = find_spectrum(a, std::nullopt, kTr);
    REQUIRE_FALSE(v.empty());
    const Eigenpair& p = v.front();
    const double kappa = std::sqrt(p.gap);
    const double I = window_integral(p, kappa);
    CHECK(I == doctest::Approx(extract_tail(p).alpha * kPi * kappa).epsilon(1e-6));
    CHECK(window_integral_quadrature(p, kappa, 32) == doctest::Approx(I).epsilon(1e-12));
  }
}

TEST_CASE("two windows: counts and bracketing at a=1") {
  const double lam = single_a1()[0].lambda;
  const auto v = find_spectrum(1.0, 8.0, kTr);
  REQUIRE(v.size() == 2);
  const Eigenpair& plus = v[0].odd ? v[1] : v[0];
  const Eigenpair& minus = v[0].odd ? v[0] : v[1];
  CHECK(plus.lambda < lam);
  CHECK(minus.lambda > lam);
  CHECK(l2_norm(plus) == doctest::Approx(1.0).epsilon(1e-10));
  // odd sector vanishes on the symmetry plane
  CHECK(std::abs(eigenfunction_value(minus, 0.0, 1.0)) < 1e-12);
}

TEST_CASE("critical widths") {
  const CriticalSearch cs = find_critical_widths(2, kTr);
  REQUIRE(cs.widths.size() == 2);
  const CriticalWidth& c1 = cs.widths[0];
  CHECK(c1.odd);
  CHECK(c1.a_n > 2.2);
  CHECK(c1.a_n < 2.35);
  CHECK(cs.widths[1].a_n > c1.a_n);
  CHECK(c1.residual < 1e-10);
  CHECK(c1.resonance.outside[0] == doctest::Approx(1.0));
  const double I = window_integral(c1.resonance, std::sqrt(3.0));
  CHECK(I == doctest::Approx(std::sqrt(3.0) * kPi / 2 * c1.beta_n).epsilon(1e-4));
  // the odd single-window eigenvalue appears just above a1
  const auto below = find_eigenvalues(canonical(c1.a_n - 0.02, Kind::SingleWindowOdd), kTr);
  const auto above = find_eigenvalues(canonical(c1.a_n + 0.02, Kind::SingleWindowOdd), kTr);
  CHECK(below.empty());
  CHECK(above.size() == 1);
}

TEST_CASE("near-threshold assembly approaches the threshold system") {
  const Truncation tr{24, 256};
  for (bool odd : {false, true}) {
    const auto g = assemble(canonical(2.0, odd ? Kind::SingleWindowOdd : Kind::SingleWindowEven),
                            SpectralPoint::from_gap(1e-10), tr);
    const auto t = assemble_threshold(2.0, odd, tr);
    Eigen::MatrixXd D = g.matrix - t.matrix;
    // the first outside mode carries kappa_1 = sqrt(gap)
    CHECK(std::abs(D(tr.N, tr.N)) == doctest::Approx(1e-5).epsilon(1e-3));
    D(tr.N, tr.N) = 0.0;
    CHECK(D.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("invalid tolerance and geometry") {
  CHECK_THROWS_AS(find_eigenvalues(canonical(1.0, Kind::SingleWindowEven), kTr, 1e-14), std::invalid_argument);
  CHECK_THROWS_AS(canonical(1.0, Kind::TwoWindowEven, 0.5), GeometryError);
}
