#pragma once

#include <utility>
#include <vector>

namespace modeguide {

struct SplittingPrediction {
  double lambda_j = 0.0;
  double mu_alpha = 0.0;
  double mu_integral = 0.0;
  double rate = 0.0;  // 2 sqrt(1 - lambda_j)

  double mu() const { return mu_integral; }
  double delta(double l) const;             // mu e^{-rate l}
  double lambda_even(double l) const;       // lambda_j - delta
  double lambda_odd(double l) const;        // lambda_j + delta
};

struct ThresholdPrediction {
  double mu_beta = 0.0;
  double mu_integral = 0.0;
  double rate = 0.0;  // 4 sqrt(3)

  double gap(double l) const;    // 1 - lambda
  double decay(double l) const;  // sqrt(mu) e^{-2 sqrt(3) l}
};

struct FitResult {
  double rate = 0.0;
  double log_prefactor = 0.0;
  double r2 = 0.0;
  int n_points = 0;
  double prefactor() const;
};

double mu_from_alpha(double lambda_j, double alpha);
double mu_from_integral(double lambda_j, double I);
SplittingPrediction predict_splitting(double lambda_j, double alpha, double I);

ThresholdPrediction predict_threshold(double beta, double I);

FitResult fit_exponential(const std::vector<std::pair<double, double>>& samples);

}  // namespace modeguide
