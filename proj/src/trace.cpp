#include <cmath>
#include <vector>

#include "modeguide/quadrature.hpp"
#include "modeguide/solver.hpp"

namespace modeguide {

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

double safe_log(double v) { return v > 0.0 ? std::log(v) : 0.0; }

// sum_j phi_j(y) phi_j(y') / j
double kernel_out(double y, double yp) {
  return (safe_log(std::sin(0.5 * (y + yp))) - safe_log(std::abs(std::sin(0.5 * (y - yp))))) / kPi;
}

// sum_m chi_m(y) chi_m(y') / (m - 1/2)
double kernel_win(double y, double yp) {
  return (safe_log(std::abs(1.0 / std::tan(0.25 * std::abs(y - yp)))) +
          safe_log(1.0 / std::tan(0.25 * (y + yp)))) /
         kPi;
}

// integral over the interface of the flux times a log kernel, y' = pi s^2
double kernel_integral(const Eigen::VectorXd& c, double y, bool window) {
  const int N = static_cast<int>(c.size());
  auto f = [&](double s) {
    std::vector<double> T(N);
    even_chebyshev(N, s, T.data());
    double g = 0.0;
    for (int i = 0; i < N; ++i) g += c[i] * T[i];
    const double yp = kPi * s * s;
    const double k = window ? kernel_win(y, yp) : kernel_out(y, yp);
    return 2.0 * std::sqrt(kPi) * g * k;
  };
  const double ss = std::sqrt(y / kPi);
  double v = 0.0;
  if (ss > 0.0) v += integrate_singular(f, 0.0, ss, 1e-12);
  if (ss < 1.0) v += integrate_singular(f, ss, 1.0, 1e-12);
  return v;
}

double phi(int j, double y) { return kSqrt2OverPi * std::sin(j * y); }
double chi(int m, double y) { return kSqrt2OverPi * std::cos((m - 0.5) * y); }

}  // namespace

TracePair interface_trace(const Eigenpair& p, bool right_interface, double y) {
  const int N = p.trunc.N, J = p.trunc.J;
  MatchingSystem sys;
  if (p.threshold)
    sys = assemble_threshold(p.a, p.odd, p.trunc);
  else
    sys = assemble(canonical(p.a, p.kind, p.two_window() ? std::optional<double>(p.l) : std::nullopt),
                   SpectralPoint::from_gap(p.gap), p.trunc);
  const ModeTable& t = *sys.table;
  const ModeWeights& w = sys.weights;
  TracePair tp;
  if (y >= kPi) return tp;

  auto outside_side = [&](const Eigen::VectorXd& c, double b1, const std::vector<double>& wj, double sgn) {
    // sgn = -1 for a decaying region to the right, +1 for region I to the left
    const Eigen::VectorXd ac = t.A.transpose() * c;
    double v = b1 * phi(1, y) + sgn * (kernel_integral(c, y, false) - ac[0] * phi(1, y));
    for (int j = 2; j <= J; ++j) v += sgn * wj[j - 1] * ac[j - 1] * phi(j, y);
    return v;
  };

  if (!p.two_window()) {
    const Eigen::VectorXd c = p.flux.head(N);
    const Eigen::VectorXd bc = t.B.transpose() * c;
    const EdgePair& e = p.odd ? sys.edge_odd : sys.edge_even;
    const auto& win = p.odd ? p.window_odd : p.window_even;
    double wv = win[0] * e.f * chi(1, y) + kernel_integral(c, y, true) - bc[0] * chi(1, y) / 0.5;
    for (int m = 2; m <= J; ++m) wv += w.w_win[m - 1] * bc[m - 1] * chi(m, y);
    tp.left = wv;
    tp.right = outside_side(c, p.outside[0], w.w_out, -1.0);
    return tp;
  }

  const Eigen::VectorXd cL = p.flux.head(N), cR = p.flux.segment(N, N);
  const Eigen::VectorXd bL = t.B.transpose() * cL, bR = t.B.transpose() * cR;
  const double Ae = p.window_even[0], Ao = p.window_odd[0];
  const double ce = sys.edge_even.f, so = sys.edge_odd.f;
  if (right_interface) {
    double wv = (Ae * ce + Ao * so) * chi(1, y) + kernel_integral(cR, y, true) - bR[0] * chi(1, y) / 0.5;
    for (int m = 2; m <= J; ++m) wv += (w.w_win[m - 1] * bR[m - 1] - w.w_cross[m - 1] * bL[m - 1]) * chi(m, y);
    tp.left = wv;
    tp.right = outside_side(cR, p.outside[0], w.w_out, -1.0);
  } else {
    double wv = (Ae * ce - Ao * so) * chi(1, y) - kernel_integral(cL, y, true) + bL[0] * chi(1, y) / 0.5;
    for (int m = 2; m <= J; ++m) wv += (w.w_cross[m - 1] * bR[m - 1] - w.w_win[m - 1] * bL[m - 1]) * chi(m, y);
    tp.right = wv;
    tp.left = outside_side(cL, p.inner[0], w.w_inner, 1.0);
  }
  return tp;
}

}  // namespace modeguide
