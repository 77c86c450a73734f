#include "modeguide/quadrature.hpp"

#include <cmath>
#include <gsl/gsl_sf_zeta.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <stdexcept>

namespace modeguide {

QuadRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  // Newton on the three-term recurrence; the GSL table loses digits for n ~ 10^3
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 4e-16 && it > 0) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = mid - half * x;
    r.w[i] = half * w;
    r.x[n - 1 - i] = mid + half * x;
    r.w[n - 1 - i] = half * w;
  }
  return r;
}

double hurwitz_zeta(double s, double q) { return gsl_sf_hzeta(s, q); }

double integrate_singular(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  if (hi <= lo) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate(f, lo, hi, tol);
}

double integrate_smooth(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, tol);
}

}  // namespace modeguide
