#include <doctest.h>

#include <cmath>
#include <vector>

#include "modeguide/asymptotics.hpp"
#include "modeguide/geometry.hpp"

using namespace modeguide;

TEST_CASE("prefactor formulas agree when the identity holds") {
  const double lam = 0.8, alpha = 0.4;
  const double I = alpha * kPi * std::sqrt(1 - lam);
  const SplittingPrediction p = predict_splitting(lam, alpha, I);
  CHECK(p.mu_alpha == doctest::Approx(p.mu_integral).epsilon(1e-14));
  CHECK(p.rate == doctest::Approx(2 * std::sqrt(0.2)));
  CHECK(p.delta(3.0) == doctest::Approx(p.mu() * std::exp(-p.rate * 3.0)));
  CHECK(p.lambda_even(3.0) < lam);
  CHECK(p.lambda_odd(3.0) > lam);
  CHECK_THROWS_AS(mu_from_alpha(1.2, 0.3), std::domain_error);
  CHECK_THROWS_AS(mu_from_integral(0.2, 0.3), std::domain_error);
}

TEST_CASE("threshold prediction") {
  const double beta = 4.0;
  const ThresholdPrediction t = predict_threshold(beta, std::sqrt(3.0) * kPi / 2 * beta);
  CHECK(t.mu_beta == doctest::Approx(3 * kPi * kPi * 256).epsilon(1e-14));
  CHECK(t.mu_integral == doctest::Approx(t.mu_beta).epsilon(1e-13));
  CHECK(t.rate == doctest::Approx(6.928203230275509));
  CHECK(t.decay(2.0) * t.decay(2.0) == doctest::Approx(t.gap(2.0)));
}

TEST_CASE("exponential fit recovers synthetic data") {
  std::vector<std::pair<double, double>> s;
  for (double l = 4; l <= 9; l += 1) s.push_back({l, 0.3 * std::exp(-0.75 * l)});
  const FitResult f = fit_exponential(s);
  CHECK(f.rate == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f.prefactor() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.n_points == 6);
  s[2].second *= 1.1;
  CHECK(fit_exponential(s).r2 < 1.0);
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS(fit_exponential({{1, 1}, {2, 0.5}}));
  CHECK_THROWS(fit_exponential({{1, 1}, {2, 0.0}, {3, 0.1}}));
  CHECK_THROWS(fit_exponential({{1, 1}, {1, 0.5}, {3, 0.1}}));
}
