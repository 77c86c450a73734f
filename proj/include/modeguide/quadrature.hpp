#pragma once

#include <functional>
#include <vector>

namespace modeguide {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre on [lo, hi]
QuadRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

// Hurwitz zeta sum_{k>=0} (k+q)^{-s}
double hurwitz_zeta(double s, double q);

// Double-exponential quadrature; tolerates integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-13);

// Adaptive Gauss-Kronrod for smooth integrands.
double integrate_smooth(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-14);

}  // namespace modeguide
