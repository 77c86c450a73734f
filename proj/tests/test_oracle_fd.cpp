#include <doctest.h>

#include <cmath>
#include <vector>

#include "modeguide/oracle_fd.hpp"

using namespace modeguide;

namespace {

Eigen::SparseMatrix<double> dirichlet_1d(int n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 / (h * h));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0 / (h * h));
      t.emplace_back(i + 1, i, -1.0 / (h * h));
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("Lanczos on the 1D Dirichlet Laplacian") {
  const int n = 399;
  const double h = 1.0 / (n + 1);
  const auto A = dirichlet_1d(n, h);
  LanczosInfo info;
  const auto ev = lowest_eigenvalues(A, 4, 0.0, 3, 1e-12, &info);
  REQUIRE(ev.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    const double s = std::sin(k * M_PI * h / 2);
    CHECK(ev[k - 1] == doctest::Approx(4 / (h * h) * s * s).epsilon(1e-10));
  }
  CHECK(info.max_residual < 1e-8);
  CHECK(info.iterations > 0);
  // same seed, same answer
  CHECK(lowest_eigenvalues(A, 4, 0.0, 3, 1e-12) == ev);
}

TEST_CASE("inertia counts") {
  const int n = 199;
  const double h = 1.0 / (n + 1);
  const auto A = dirichlet_1d(n, h);
  for (double tau : {5.0, 100.0, 1000.0, 5000.0}) {
    int expect = 0;
    for (int k = 1; k <= n; ++k) {
      const double s = std::sin(k * M_PI * h / 2);
      if (4 / (h * h) * s * s < tau) ++expect;
    }
    CHECK(count_below(A, tau) == expect);
  }
}

TEST_CASE("Richardson extrapolation") {
  auto f = [](double h) { return 2.0 + 3.0 * h * h; };
  const auto e = refine_and_extrapolate({f(0.1), f(0.05), f(0.025)});
  CHECK(e.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(e.order == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e.error_bound == doctest::Approx(3.0 * (0.0025 - 0.000625)));
  CHECK_FALSE(e.flagged);
  auto g = [](double h) { return 1.0 - 0.5 * h; };
  const auto l = refine_and_extrapolate({g(0.2), g(0.1), g(0.05)});
  CHECK(l.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l.order == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(refine_and_extrapolate({1.0, 1.2, 1.1}).flagged);
  CHECK(refine_and_extrapolate({1.0 + 3 * 0.01, 1.0 + 3 * 0.0025}).value == doctest::Approx(1.0));
  CHECK_THROWS(refine_and_extrapolate({1.0}));
}

TEST_CASE("grid alignment and discrete threshold") {
  OracleConfig oc;
  oc.h = 1.0 / 16;
  oc.L = 10;
  CHECK_THROWS_AS(discretize(canonical(1.03, Kind::SingleWindowEven), oc), GeometryError);
  oc.L = 10.01;
  CHECK_THROWS_AS(discretize(canonical(1.0, Kind::SingleWindowEven), oc), GeometryError);
  oc.L = 4;
  CHECK_THROWS_AS(discretize(canonical(1.0, Kind::TwoWindowEven, 3.5), oc), GeometryError);
  oc.L = 10;
  const FdOperator op = discretize(canonical(1.0, Kind::SingleWindowEven), oc);
  CHECK((Eigen::SparseMatrix<double>(op.A.transpose()) - op.A).norm() < 1e-12 * op.A.norm());
  const double s = std::sin(op.hy / 2);
  CHECK(op.threshold() == doctest::Approx(4 / (op.hy * op.hy) * s * s));
  CHECK(op.threshold() < 1.0);
}

TEST_CASE("bound state below the discrete threshold, converging from above") {
  std::vector<double> v;
  for (double h : {1.0 / 8, 1.0 / 16}) {
    OracleConfig oc;
    oc.h = h;
    oc.L = 17;
    oc.k = 1;
    const FdOperator op = discretize(canonical(1.0, Kind::SingleWindowEven), oc);
    const double lam = lowest_eigenvalues(op, 1, oc).front();
    CHECK(lam < op.threshold());
    CHECK(count_below(op.A, op.threshold()) == 1);
    v.push_back(lam);
  }
  CHECK(v[1] < v[0]);
}
