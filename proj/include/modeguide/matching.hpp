#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "modeguide/geometry.hpp"
#include "modeguide/mode_tables.hpp"

namespace modeguide {

// N: flux basis functions per interface; J: transverse modes per region.
struct Truncation {
  int N = 40;
  int J = 512;
  void validate() const;
};

// Per-mode weights evaluated at one spectral point.
struct ModeWeights {
  std::vector<double> kappa;      // j = 1..J, outside rates
  std::vector<double> nu_sq;      // m = 1..J, window squared rates
  std::vector<double> w_out;      // 1/kappa_j - 1/j, j = 1 entry -1
  std::vector<double> w_win;      // window weight minus 1/(m-1/2), m = 1 entry -2
  // two-window only
  std::vector<double> rho;        // region-I interface log-derivatives
  std::vector<double> w_inner;    // 1/rho_j - 1/j, j = 1 entry -1
  std::vector<double> w_cross;    // 1/(nu sinh 2 nu a), m = 1 entry 0
  double tail = 0.0;              // coefficient of P0 P0^T for modes beyond J
};

// First window mode profile at the window edge, normalized so f^2 + f'^2 = 1.
struct EdgePair {
  double f = 0.0;
  double fp = 0.0;
  double scale = 1.0;  // hypot of the raw pair
};

EdgePair even_edge(double nu_sq, double a);
EdgePair odd_edge(double nu_sq, double a);

// Region-I profile G(x)/G(x_L): cosh (even) or sinh (odd) ratio; value and derivative.
void inner_profile(bool odd, double kappa, double xL, double x, double& g, double& gp);
// G'(x_L)/G(x_L)
double inner_rate(bool odd, double kappa, double xL);

struct MatchingSystem {
  Kind kind = Kind::SingleWindowEven;
  bool threshold = false;
  SpectralPoint point;
  double a = 0.0;
  double l = 0.0;
  Truncation trunc;
  Eigen::MatrixXd matrix;       // equilibrated system, determinant sign source
  Eigen::MatrixXd symmetrized;  // equilibrated symmetric form
  std::vector<double> conditioning_log;  // ln of the scaling per unknown: u = exp(log) * v
  ModeWeights weights;
  EdgePair edge_even, edge_odd;  // single-window uses the one matching the kind
  std::shared_ptr<const ModeTable> table;

  int size() const { return static_cast<int>(matrix.rows()); }
  // kernel vector of `matrix` mapped back to unscaled unknowns
  Eigen::VectorXd unscale(const Eigen::VectorXd& v) const;
};

MatchingSystem assemble_single(const CanonicalConfig& cfg, const SpectralPoint& pt,
                               const Truncation& trunc);
MatchingSystem assemble_single(const CanonicalConfig& cfg, double lambda, const Truncation& trunc);
MatchingSystem assemble_two_window(const CanonicalConfig& cfg, const SpectralPoint& pt,
                                   const Truncation& trunc);
MatchingSystem assemble_two_window(const CanonicalConfig& cfg, double lambda,
                                   const Truncation& trunc);
// lambda = 1 limit of the single-window system, either window parity
MatchingSystem assemble_threshold(double a, bool odd, const Truncation& trunc);

MatchingSystem assemble(const CanonicalConfig& cfg, const SpectralPoint& pt, const Truncation& trunc);

struct Merit {
  double s_min = 0.0;
  double s_max = 0.0;
  int det_sign = 0;
};

Merit merit(const Eigen::MatrixXd& K);
Merit merit(const MatchingSystem& sys);
int det_sign(const Eigen::MatrixXd& K);

// Right singular vector of the smallest singular value, unscaled.
Eigen::VectorXd kernel_vector(const MatchingSystem& sys);

}  // namespace modeguide
