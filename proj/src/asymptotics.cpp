#include "modeguide/asymptotics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "modeguide/geometry.hpp"

namespace modeguide {

namespace {
void check_lambda(double lam) {
  if (!(lam > 0.25 && lam < 1.0)) throw std::domain_error("lambda_j outside (1/4, 1)");
}
}  // namespace

double SplittingPrediction::delta(double l) const { return mu() * std::exp(-rate * l); }
double SplittingPrediction::lambda_even(double l) const { return lambda_j - delta(l); }
double SplittingPrediction::lambda_odd(double l) const { return lambda_j + delta(l); }

double ThresholdPrediction::gap(double l) const { return mu_integral * std::exp(-rate * l); }
double ThresholdPrediction::decay(double l) const {
  return std::sqrt(mu_integral) * std::exp(-0.5 * rate * l);
}

double FitResult::prefactor() const { return std::exp(log_prefactor); }

double mu_from_alpha(double lambda_j, double alpha) {
  check_lambda(lambda_j);
  return alpha * alpha * kPi * std::sqrt(1.0 - lambda_j);
}

double mu_from_integral(double lambda_j, double I) {
  check_lambda(lambda_j);
  return I * I / (kPi * std::sqrt(1.0 - lambda_j));
}

SplittingPrediction predict_splitting(double lambda_j, double alpha, double I) {
  SplittingPrediction p;
  p.lambda_j = lambda_j;
  p.mu_alpha = mu_from_alpha(lambda_j, alpha);
  p.mu_integral = mu_from_integral(lambda_j, I);
  p.rate = 2.0 * std::sqrt(1.0 - lambda_j);
  return p;
}

ThresholdPrediction predict_threshold(double beta, double I) {
  ThresholdPrediction p;
  const double b2 = beta * beta, i2 = I * I;
  p.mu_beta = 3.0 * kPi * kPi * b2 * b2;
  p.mu_integral = 16.0 / (3.0 * kPi * kPi) * i2 * i2;
  p.rate = 4.0 * std::sqrt(3.0);
  return p;
}

FitResult fit_exponential(const std::vector<std::pair<double, double>>& s) {
  if (s.size() < 3) throw std::invalid_argument("fit_exponential: at least 3 samples required");
  std::set<double> ls;
  for (const auto& [l, d] : s) {
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("fit_exponential: delta must be positive");
    ls.insert(l);
  }
  if (ls.size() != s.size()) throw std::invalid_argument("fit_exponential: l values must be distinct");
  const double n = double(s.size());
  double mx = 0, my = 0;
  for (const auto& [l, d] : s) {
    mx += l;
    my += std::log(d);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [l, d] : s) {
    const double dx = l - mx, dy = std::log(d) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  FitResult f;
  const double slope = sxy / sxx;
  f.rate = -slope;
  f.log_prefactor = my - slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.n_points = static_cast<int>(s.size());
  return f;
}

}  // namespace modeguide
