#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modeguide/geometry.hpp"
#include "modeguide/matching.hpp"

namespace modeguide {

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Region expansions of an eigenfunction on the half-strip x >= 0.
// Window amplitudes multiply profiles normalized so that f(edge)^2 + f'(edge)^2 = 1.
struct Eigenpair {
  double lambda = 0.0;
  double gap = 1.0;
  Kind kind = Kind::SingleWindowEven;
  bool odd = false;
  bool threshold = false;
  double a = 0.0;
  double l = 0.0;
  Truncation trunc;
  double residual = 0.0;  // s_min / s_max at the root
  double norm = 1.0;      // factor applied to the raw kernel vector
  Eigen::VectorXd flux;   // interface flux coefficients (left block first for two windows)
  std::vector<double> outside;      // B_j: amplitude of e^{-kappa_j (x - x_R)} sin mode j
  std::vector<double> inner;        // C_j: amplitude of the region-I profile, two windows
  std::vector<double> window_even;  // even window profile amplitudes
  std::vector<double> window_odd;   // odd window profile amplitudes
  // bordered scalars: single [B1, A1]; two-window [C1, B1, Ae, Ao]
  std::vector<double> border;

  double x_right() const { return threshold || l == 0.0 ? a : l + a; }
  double x_left() const { return l - a; }
  bool two_window() const { return is_two_window(kind); }
};

struct TailAmplitude {
  double alpha = 0.0;
};

struct CriticalWidth {
  int n = 0;
  double a_n = 0.0;
  double beta_n = 0.0;
  bool odd = false;
  double residual = 0.0;
  Eigenpair resonance;
};

struct CriticalSearch {
  std::vector<CriticalWidth> widths;
  bool range_exhausted = false;
};

struct ScanOptions {
  double step = 1e-3;
  double eps = 1e-6;
  // logarithmic scan of 1 - lambda, used for the two-window even sector
  std::optional<bool> log_scan;
  double log_hi = 1e-2;
  double log_lo = 1e-40;
  int per_decade = 10;
  int jobs = 1;
};

std::vector<Eigenpair> find_eigenvalues(const CanonicalConfig& cfg, const Truncation& trunc,
                                        double tol = 1e-12, const ScanOptions& opt = {});
// both parities of a single window, or both sectors of two windows, merged ascending
std::vector<Eigenpair> find_spectrum(double a, std::optional<double> l, const Truncation& trunc,
                                     double tol = 1e-12, const ScanOptions& opt = {});

Eigenpair make_eigenpair(const MatchingSystem& sys, const Eigen::VectorXd& u);
// L2 norm over the full strip
double l2_norm(const Eigenpair& p);
void normalize(Eigenpair& p);

double eigenfunction_value(const Eigenpair& p, double x1, double x2);
TailAmplitude extract_tail(const Eigenpair& p);
// integral over the window of psi(x1, 0) e^{r x1}; x1 measured from the window center
double window_integral(const Eigenpair& p, double r);
double window_integral_quadrature(const Eigenpair& p, double r, int order);

// One-sided traces at a region interface, evaluated with the exact log kernels.
struct TracePair {
  double left = 0.0;
  double right = 0.0;
};
TracePair interface_trace(const Eigenpair& p, bool right_interface, double x2);

CriticalSearch find_critical_widths(int n_max, const Truncation& trunc, double tol = 1e-12,
                                    double a_max = 12.0, double step = 0.05, int jobs = 1);
CriticalWidth resolve_critical(double a, bool odd, const Truncation& trunc);

// profile normalized at the edge x = a; value and derivative at x in [-a, a]
void window_profile(bool odd, double nu_sq, double a, double x, double& v, double& dv);

}  // namespace modeguide
