#include "modeguide/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modeguide/parallel.hpp"
#include "modeguide/quadrature.hpp"

namespace modeguide {

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

// -expm1(-2 u a) / u, finite at u = 0
double hfun(double u, double a) {
  if (std::abs(u * a) < 1e-12) return 2.0 * a;
  return -std::expm1(-2.0 * u * a) / u;
}

const QuadRule& gl64() {
  static const QuadRule r = gauss_legendre(64, -1.0, 1.0);
  return r;
}

// integral over [0, a] of the squared normalized window profile
double profile_sq_integral(bool odd, double nu_sq, double a) {
  if (nu_sq >= 1.0) {
    const double nu = std::sqrt(nu_sq);
    const double q = std::exp(-2.0 * nu * a);
    const double s = (1.0 - q * q) / (2.0 * nu);
    if (!odd) return (2.0 * a * q + s) / ((1 + q) * (1 + q) + nu_sq * (1 - q) * (1 - q));
    return ((s - 2.0 * a * q) / nu_sq) / ((1 - q) * (1 - q) / nu_sq + (1 + q) * (1 + q));
  }
  const QuadRule& g = gl64();
  double sum = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    const double x = 0.5 * a * (g.x[i] + 1.0);
    double v, dv;
    window_profile(odd, nu_sq, a, x, v, dv);
    sum += 0.5 * a * g.w[i] * v * v;
  }
  return sum;
}

double profile_exp_integral(bool odd, double nu_sq, double a, double r, int order) {
  if (nu_sq >= 1.0) {
    const double nu = std::sqrt(nu_sq);
    const double q = std::exp(-2.0 * nu * a);
    const double ep = std::exp(r * a), em = std::exp(-r * a);
    if (!odd)
      return (ep * hfun(nu + r, a) + em * hfun(nu - r, a)) /
             std::sqrt((1 + q) * (1 + q) + nu_sq * (1 - q) * (1 - q));
    return (ep * hfun(nu + r, a) - em * hfun(nu - r, a)) / nu /
           std::sqrt((1 - q) * (1 - q) / nu_sq + (1 + q) * (1 + q));
  }
  static thread_local int cached_order = 0;
  static thread_local QuadRule rule;
  if (cached_order != order) {
    rule = gauss_legendre(order, -1.0, 1.0);
    cached_order = order;
  }
  double sum = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const double x = a * rule.x[i];
    double v, dv;
    window_profile(odd, nu_sq, a, x, v, dv);
    sum += a * rule.w[i] * v * std::exp(r * x);
  }
  return sum;
}

double inner_sq_integral(bool odd, double kappa, double xL, int j) {
  if (j >= 2 && kappa * xL >= 1.0) {
    const double q = std::exp(-2.0 * kappa * xL);
    const double s = (1.0 - q * q) / (2.0 * kappa);
    if (!odd) return (2.0 * xL * q + s) / ((1 + q) * (1 + q));
    return (s - 2.0 * xL * q) / ((1 - q) * (1 - q));
  }
  const QuadRule& g = gl64();
  double sum = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    const double x = 0.5 * xL * (g.x[i] + 1.0);
    double v, dv;
    inner_profile(odd, kappa, xL, x, v, dv);
    sum += 0.5 * xL * g.w[i] * v * v;
  }
  return sum;
}

double edge_slope(bool odd, double nu_sq, double a) {
  double v, dv;
  window_profile(odd, nu_sq, a, a, v, dv);
  return dv;
}

}  // namespace

void window_profile(bool odd, double nu_sq, double a, double x, double& v, double& dv) {
  const double ax = std::abs(x);
  const double sg = x < 0 ? -1.0 : 1.0;
  if (nu_sq >= 1.0) {
    const double nu = std::sqrt(nu_sq);
    const double q = std::exp(-2.0 * nu * a);
    const double e = std::exp(-nu * (a - ax));
    const double ex = std::exp(-2.0 * nu * ax);
    if (!odd) {
      const double D = std::sqrt((1 + q) * (1 + q) + nu_sq * (1 - q) * (1 - q));
      v = e * (1.0 + ex) / D;
      dv = sg * nu * e * (1.0 - ex) / D;
    } else {
      const double D = std::sqrt((1 - q) * (1 - q) / nu_sq + (1 + q) * (1 + q));
      v = sg * e * (-std::expm1(-2.0 * nu * ax)) / nu / D;
      dv = e * (1.0 + ex) / D;
    }
    return;
  }
  const EdgePair ep = odd ? odd_edge(nu_sq, a) : even_edge(nu_sq, a);
  if (!odd) {
    v = stable_cosh(nu_sq, x) / ep.scale;
    dv = nu_sq * stable_sinhc(nu_sq, x) / ep.scale;
  } else {
    v = stable_sinhc(nu_sq, x) / ep.scale;
    dv = stable_cosh(nu_sq, x) / ep.scale;
  }
}

Eigenpair make_eigenpair(const MatchingSystem& sys, const Eigen::VectorXd& u) {
  const ModeTable& t = *sys.table;
  const ModeWeights& w = sys.weights;
  const int N = sys.trunc.N, J = sys.trunc.J;
  Eigenpair p;
  p.lambda = sys.point.lambda;
  p.gap = sys.point.gap;
  p.kind = sys.kind;
  p.odd = is_odd(sys.kind);
  p.threshold = sys.threshold;
  p.a = sys.a;
  p.l = sys.l;
  p.trunc = sys.trunc;
  p.outside.assign(J, 0.0);
  if (!is_two_window(sys.kind)) {
    const Eigen::VectorXd c = u.head(N);
    p.flux = c;
    p.border = {u[N], u[N + 1]};
    const Eigen::VectorXd ac = t.A.transpose() * c;
    const Eigen::VectorXd bc = t.B.transpose() * c;
    p.outside[0] = u[N];
    for (int j = 2; j <= J; ++j) p.outside[j - 1] = -ac[j - 1] / w.kappa[j - 1];
    auto& win = p.odd ? p.window_odd : p.window_even;
    win.assign(J, 0.0);
    win[0] = u[N + 1];
    for (int m = 2; m <= J; ++m) win[m - 1] = bc[m - 1] / edge_slope(p.odd, w.nu_sq[m - 1], sys.a);
    return p;
  }
  const Eigen::VectorXd cL = u.head(N), cR = u.segment(N, N);
  p.flux = u.head(2 * N);
  p.border = {u[2 * N], u[2 * N + 1], u[2 * N + 2], u[2 * N + 3]};
  const Eigen::VectorXd acL = t.A.transpose() * cL, acR = t.A.transpose() * cR;
  const Eigen::VectorXd bcL = t.B.transpose() * cL, bcR = t.B.transpose() * cR;
  p.inner.assign(J, 0.0);
  p.window_even.assign(J, 0.0);
  p.window_odd.assign(J, 0.0);
  p.inner[0] = u[2 * N];
  p.outside[0] = u[2 * N + 1];
  p.window_even[0] = u[2 * N + 2];
  p.window_odd[0] = u[2 * N + 3];
  for (int j = 2; j <= J; ++j) {
    p.inner[j - 1] = acL[j - 1] / w.rho[j - 1];
    p.outside[j - 1] = -acR[j - 1] / w.kappa[j - 1];
  }
  for (int m = 2; m <= J; ++m) {
    const double ns = w.nu_sq[m - 1];
    p.window_even[m - 1] = (bcR[m - 1] - bcL[m - 1]) / (2.0 * edge_slope(false, ns, sys.a));
    p.window_odd[m - 1] = (bcR[m - 1] + bcL[m - 1]) / (2.0 * edge_slope(true, ns, sys.a));
  }
  return p;
}

namespace {

void scale_pair(Eigenpair& p, double s) {
  p.flux *= s;
  for (auto* v : {&p.outside, &p.inner, &p.window_even, &p.window_odd, &p.border})
    for (double& x : *v) x *= s;
  p.norm *= s;
}

double center_slope(const Eigenpair& p) {
  const SpectralPoint pt = SpectralPoint::from_gap(p.gap);
  double s = 0.0;
  for (int m = 1; m <= p.trunc.J; ++m) {
    double v, dv;
    window_profile(true, window_rate_sq(m, pt), p.a, 0.0, v, dv);
    s += p.window_odd[m - 1] * dv;
  }
  return s;
}

}  // namespace

double l2_norm(const Eigenpair& p) {
  const SpectralPoint pt = SpectralPoint::from_gap(p.gap);
  const int J = p.trunc.J;
  double half = 0.0;
  for (int j = 1; j <= J; ++j) {
    const double k = outside_rate(j, pt);
    half += p.outside[j - 1] * p.outside[j - 1] / (2.0 * k);
  }
  if (!p.two_window()) {
    const auto& win = p.odd ? p.window_odd : p.window_even;
    for (int m = 1; m <= J; ++m)
      half += win[m - 1] * win[m - 1] * profile_sq_integral(p.odd, window_rate_sq(m, pt), p.a);
  } else {
    const double xL = p.x_left();
    for (int j = 1; j <= J; ++j)
      half += p.inner[j - 1] * p.inner[j - 1] * inner_sq_integral(p.odd, outside_rate(j, pt), xL, j);
    for (int m = 1; m <= J; ++m) {
      const double ns = window_rate_sq(m, pt);
      half += 2.0 * p.window_even[m - 1] * p.window_even[m - 1] * profile_sq_integral(false, ns, p.a);
      half += 2.0 * p.window_odd[m - 1] * p.window_odd[m - 1] * profile_sq_integral(true, ns, p.a);
    }
  }
  return std::sqrt(2.0 * half);
}

void normalize(Eigenpair& p) {
  const double n = l2_norm(p);
  if (!(n > 0.0) || !std::isfinite(n)) throw NonConvergence("eigenfunction norm is not finite");
  scale_pair(p, 1.0 / n);
  double ref;
  if (!p.two_window() && p.odd)
    ref = center_slope(p);
  else
    ref = window_integral(p, 0.0);
  if (ref < 0) scale_pair(p, -1.0);
}

double window_integral(const Eigenpair& p, double r) { return window_integral_quadrature(p, r, 64); }

double window_integral_quadrature(const Eigenpair& p, double r, int order) {
  const SpectralPoint pt = SpectralPoint::from_gap(p.gap);
  const int J = p.trunc.J;
  double sum = 0.0;
  const bool both = p.two_window();
  for (int m = 1; m <= J; ++m) {
    const double ns = window_rate_sq(m, pt);
    if (both || !p.odd) sum += p.window_even[m - 1] * profile_exp_integral(false, ns, p.a, r, order);
    if (both || p.odd) sum += p.window_odd[m - 1] * profile_exp_integral(true, ns, p.a, r, order);
  }
  // modes beyond J: flux decays like S (m - 1/2)^{-1/2}, profile integral like (e^{ra} +- e^{-ra}) nu^{-2}
  const double z = hurwitz_zeta(2.5, J + 0.5);
  const double ep = std::exp(r * p.a), em = std::exp(-r * p.a);
  const ModeTable& t = *mode_table(p.trunc.N, J);
  const int N = p.trunc.N;
  if (!both) {
    const double S = t.P0.dot(p.flux.head(N));
    sum += S * (p.odd ? ep - em : ep + em) * z;
  } else {
    const double SL = t.P0.dot(p.flux.head(N)), SR = t.P0.dot(p.flux.segment(N, N));
    sum += (SR * ep - SL * em) * z;
  }
  return kSqrt2OverPi * sum;
}

TailAmplitude extract_tail(const Eigenpair& p) {
  TailAmplitude t;
  const double k1 = outside_rate(1, SpectralPoint::from_gap(p.gap));
  t.alpha = kSqrt2OverPi * p.outside[0] * std::exp(k1 * p.x_right());
  return t;
}

double eigenfunction_value(const Eigenpair& p, double x1, double x2) {
  if (!(x2 >= 0.0 && x2 <= kPi) || !std::isfinite(x1))
    throw std::domain_error("eigenfunction_value: point outside the strip");
  if (x2 == kPi) return 0.0;
  const SpectralPoint pt = SpectralPoint::from_gap(p.gap);
  const int J = p.trunc.J;
  const double sg = (x1 < 0 && p.odd) ? -1.0 : 1.0;
  const double x = std::abs(x1);
  const double xR = p.x_right();
  const double xL = p.two_window() ? p.x_left() : -1.0;
  if (x == xR) {
    const TracePair tp = interface_trace(p, true, x2);
    return sg * 0.5 * (tp.left + tp.right);
  }
  if (p.two_window() && x == xL) {
    const TracePair tp = interface_trace(p, false, x2);
    return sg * 0.5 * (tp.left + tp.right);
  }
  double s = 0.0;
  if (x > xR) {
    if (x2 == 0.0) return 0.0;
    for (int j = 1; j <= J; ++j)
      s += p.outside[j - 1] * std::exp(-outside_rate(j, pt) * (x - xR)) * std::sin(j * x2);
  } else if (p.two_window() && x < xL) {
    if (x2 == 0.0) return 0.0;
    for (int j = 1; j <= J; ++j) {
      double g, gp;
      inner_profile(p.odd, outside_rate(j, pt), xL, x, g, gp);
      s += p.inner[j - 1] * g * std::sin(j * x2);
    }
  } else {
    const double t = p.two_window() ? x - p.l : x;
    for (int m = 1; m <= J; ++m) {
      const double ns = window_rate_sq(m, pt);
      const double cy = std::cos((m - 0.5) * x2);
      double v, dv;
      if (p.two_window() || !p.odd) {
        window_profile(false, ns, p.a, t, v, dv);
        s += p.window_even[m - 1] * v * cy;
      }
      if (p.two_window() || p.odd) {
        window_profile(true, ns, p.a, t, v, dv);
        s += p.window_odd[m - 1] * v * cy;
      }
    }
  }
  return sg * kSqrt2OverPi * s;
}

namespace {

int sign_at(const CanonicalConfig& cfg, double gap, const Truncation& tr) {
  return det_sign(assemble(cfg, SpectralPoint::from_gap(gap), tr).matrix);
}

double bisect_gap(const CanonicalConfig& cfg, double lo, double hi, int slo, const Truncation& tr,
                  double tol) {
  // lo < hi in gap; slo is the determinant sign at lo
  for (int it = 0; it < 600; ++it) {
    if (hi - lo <= tol * std::min(1.0, hi)) return 0.5 * (lo + hi);
    const double mid = (hi > 4.0 * lo && lo > 0.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const int sm = sign_at(cfg, mid, tr);
    if (sm == 0) return mid;
    if (sm == slo)
      lo = mid;
    else
      hi = mid;
  }
  std::ostringstream os;
  os.precision(17);
  os << "bisection did not converge: bracket 1-lambda in [" << lo << ", " << hi << "]";
  throw NonConvergence(os.str());
}

}  // namespace

std::vector<Eigenpair> find_eigenvalues(const CanonicalConfig& cfg, const Truncation& tr, double tol,
                                        const ScanOptions& opt) {
  cfg.base.validate();
  tr.validate();
  if (!(tol >= 1e-12)) throw std::invalid_argument("find_eigenvalues: tol >= 1e-12 required");
  std::vector<double> gaps;
  const double gmax = 0.75 - opt.eps;
  for (long k = 0;; ++k) {
    const double g = gmax - k * opt.step;
    if (g <= opt.eps) break;
    gaps.push_back(g);
  }
  gaps.push_back(opt.eps);
  const bool logscan = opt.log_scan.value_or(cfg.kind() == Kind::TwoWindowEven);
  if (logscan) {
    for (int i = 0;; ++i) {
      const double g = opt.log_hi * std::pow(10.0, -double(i) / opt.per_decade);
      if (g < opt.log_lo) break;
      gaps.push_back(g);
    }
  }
  std::sort(gaps.begin(), gaps.end(), std::greater<double>());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());

  const std::vector<int> signs = parallel_map<int>(
      gaps.size(), opt.jobs, [&](std::size_t i) { return sign_at(cfg, gaps[i], tr); });

  std::vector<double> roots;
  for (size_t i = 0; i < gaps.size(); ++i) {
    if (signs[i] == 0) {
      roots.push_back(gaps[i]);
      continue;
    }
    if (i + 1 < gaps.size() && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      // gaps[i+1] < gaps[i]
      roots.push_back(bisect_gap(cfg, gaps[i + 1], gaps[i], signs[i + 1], tr, tol));
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  std::vector<double> merged;
  for (double g : roots)
    if (merged.empty() || std::abs(merged.back() - g) > std::max(10 * tol * std::min(1.0, g), 1e-9 * g))
      merged.push_back(g);

  std::vector<Eigenpair> out = parallel_map<Eigenpair>(merged.size(), opt.jobs, [&](std::size_t i) {
    const MatchingSystem sys = assemble(cfg, SpectralPoint::from_gap(merged[i]), tr);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigenpair p = make_eigenpair(sys, sys.unscale(svd.matrixV().col(sys.size() - 1)));
    p.residual = sv[sv.size() - 1] / sv[0];
    normalize(p);
    return p;
  });
  return out;
}

std::vector<Eigenpair> find_spectrum(double a, std::optional<double> l, const Truncation& tr, double tol,
                                     const ScanOptions& opt) {
  std::vector<Eigenpair> all;
  const Kind ks[2] = {l ? Kind::TwoWindowEven : Kind::SingleWindowEven,
                      l ? Kind::TwoWindowOdd : Kind::SingleWindowOdd};
  for (Kind k : ks) {
    auto v = find_eigenvalues(canonical(a, k, l), tr, tol, opt);
    all.insert(all.end(), v.begin(), v.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Eigenpair& x, const Eigenpair& y) { return x.gap > y.gap; });
  return all;
}

CriticalWidth resolve_critical(double a, bool odd, const Truncation& tr) {
  const MatchingSystem sys = assemble_threshold(a, odd, tr);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  CriticalWidth cw;
  cw.a_n = a;
  cw.odd = odd;
  cw.residual = sv[sv.size() - 1] / sv[0];
  Eigenpair p = make_eigenpair(sys, sys.unscale(svd.matrixV().col(sys.size() - 1)));
  const double b1 = p.outside[0];
  if (b1 == 0.0) throw NonConvergence("resonance has no first-mode tail");
  scale_pair(p, 1.0 / b1);
  p.norm = 1.0 / b1;
  p.residual = cw.residual;
  cw.beta_n = kSqrt2OverPi * p.outside[1] * std::exp(std::sqrt(3.0) * a);
  cw.resonance = std::move(p);
  return cw;
}

CriticalSearch find_critical_widths(int n_max, const Truncation& tr, double tol, double a_max,
                                    double step, int jobs) {
  if (n_max < 1) throw std::invalid_argument("find_critical_widths: n_max >= 1 required");
  tr.validate();
  std::vector<double> grid;
  for (int k = 1; k * step <= a_max + 1e-12; ++k) grid.push_back(k * step);
  std::vector<std::pair<double, bool>> roots;
  for (bool odd : {false, true}) {
    auto sgn = [&](double a) { return det_sign(assemble_threshold(a, odd, tr).matrix); };
    const std::vector<int> s =
        parallel_map<int>(grid.size(), jobs, [&](std::size_t i) { return sgn(grid[i]); });
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      if (s[i] == 0) {
        roots.push_back({grid[i], odd});
        continue;
      }
      if (s[i + 1] == 0 || s[i] == s[i + 1]) continue;
      double lo = grid[i], hi = grid[i + 1];
      const int slo = s[i];
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int sm = sgn(mid);
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        (sm == slo ? lo : hi) = mid;
      }
      roots.push_back({0.5 * (lo + hi), odd});
    }
  }
  std::sort(roots.begin(), roots.end());
  CriticalSearch out;
  for (const auto& [a, odd] : roots) {
    if (static_cast<int>(out.widths.size()) >= n_max) break;
    CriticalWidth cw = resolve_critical(a, odd, tr);
    cw.n = static_cast<int>(out.widths.size()) + 1;
    out.widths.push_back(std::move(cw));
  }
  out.range_exhausted = static_cast<int>(out.widths.size()) < n_max;
  return out;
}

}  // namespace modeguide
