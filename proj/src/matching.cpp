#include "modeguide/matching.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modeguide/quadrature.hpp"
#include "modeguide/simd.hpp"

namespace modeguide {

void Truncation::validate() const {
  if (N < 4) throw std::invalid_argument("truncation: N >= 4 required");
  if (J < 16) throw std::invalid_argument("truncation: J >= 16 required");
}

Eigen::VectorXd MatchingSystem::unscale(const Eigen::VectorXd& v) const {
  Eigen::VectorXd u = v;
  for (int i = 0; i < u.size(); ++i) u[i] *= std::exp(conditioning_log[i]);
  return u;
}

EdgePair even_edge(double nu_sq, double a) {
  EdgePair e;
  const double f = stable_cosh(nu_sq, a);
  const double fp = nu_sq * stable_sinhc(nu_sq, a);
  e.scale = std::hypot(f, fp);
  e.f = f / e.scale;
  e.fp = fp / e.scale;
  return e;
}

EdgePair odd_edge(double nu_sq, double a) {
  EdgePair e;
  const double f = stable_sinhc(nu_sq, a);
  const double fp = stable_cosh(nu_sq, a);
  e.scale = std::hypot(f, fp);
  e.f = f / e.scale;
  e.fp = fp / e.scale;
  return e;
}

namespace {

// u coth u, smooth at 0
double ucothu(double u) {
  if (std::abs(u) < 1e-4) return 1.0 + u * u / 3.0;
  return u / std::tanh(u);
}

}  // namespace

double inner_rate(bool odd, double kappa, double xL) {
  if (odd) return ucothu(kappa * xL) / xL;
  return kappa * std::tanh(kappa * xL);
}

void inner_profile(bool odd, double kappa, double xL, double x, double& g, double& gp) {
  if (kappa == 0.0) {
    if (odd) {
      g = x / xL;
      gp = 1.0 / xL;
    } else {
      g = 1.0;
      gp = 0.0;
    }
    return;
  }
  // ratios written with decaying exponentials only
  const double e = std::exp(-kappa * (xL - x));
  const double e2x = std::exp(-2.0 * kappa * x);
  const double e2L = std::exp(-2.0 * kappa * xL);
  if (odd) {
    const double den = -std::expm1(-2.0 * kappa * xL);
    g = e * (-std::expm1(-2.0 * kappa * x)) / den;
    gp = kappa * e * (1.0 + e2x) / den;
  } else {
    g = e * (1.0 + e2x) / (1.0 + e2L);
    gp = kappa * e * (1.0 - e2x) / (1.0 + e2L);
  }
}

namespace {

void check_point(const SpectralPoint& pt) {
  if (!(pt.lambda > 0.25) || !(pt.gap > 0.0)) {
    std::ostringstream os;
    os << "spectral value outside (1/4, 1): lambda=" << pt.lambda << " gap=" << pt.gap;
    throw std::domain_error(os.str());
  }
}

double tail_coefficient(const SpectralPoint& pt, int J) {
  const double lam = pt.lambda;
  return 0.5 * lam * (hurwitz_zeta(4.0, J + 1.0) + hurwitz_zeta(4.0, J + 0.5));
}

// 1/kappa - 1/j without cancellation
double outside_weight(int j, double kappa, double lam) {
  return lam / (j * kappa * (j + kappa));
}

ModeWeights base_weights(const SpectralPoint& pt, int J) {
  ModeWeights w;
  w.kappa.resize(J);
  w.nu_sq.resize(J);
  w.w_out.resize(J);
  for (int j = 1; j <= J; ++j) {
    w.kappa[j - 1] = outside_rate(j, pt);
    w.nu_sq[j - 1] = window_rate_sq(j, pt);
  }
  w.w_out[0] = -1.0;
  for (int j = 2; j <= J; ++j) w.w_out[j - 1] = outside_weight(j, w.kappa[j - 1], pt.lambda);
  w.tail = tail_coefficient(pt, J);
  return w;
}

// coth(nu a)/nu - 1/p (even) or tanh(nu a)/nu - 1/p (odd), m >= 2
double window_weight(bool odd, double nu, double p, double a, double lam) {
  const double base = lam / (p * nu * (p + nu));
  const double e = std::exp(2.0 * nu * a);
  if (odd) return -2.0 / ((e + 1.0) * nu) + base;
  return 2.0 / (std::expm1(2.0 * nu * a) * nu) + base;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& M, const std::vector<double>& w) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(M.rows(), M.rows());
  simd::weighted_gram(M.data(), M.rows(), M.rows(), M.cols(), w.data(), G.data(), G.rows());
  return G;
}

void add_tail(Eigen::MatrixXd& Y, const ModeTable& t, double tail) {
  Y.noalias() += tail * t.P0 * t.P0.transpose();
}

void check_finite(const Eigen::MatrixXd& K) {
  if (!K.allFinite()) throw std::runtime_error("matching system has non-finite entries");
}

// Jacobi scaling of the flux blocks; bordered unknowns keep unit scale.
void equilibrate(MatchingSystem& s, int nflux) {
  const int n = s.matrix.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  s.conditioning_log.assign(n, 0.0);
  for (int i = 0; i < nflux; ++i) {
    const double v = std::abs(s.matrix(i, i));
    if (v > 0) {
      d[i] = 1.0 / std::sqrt(v);
      s.conditioning_log[i] = std::log(d[i]);
    }
  }
  s.matrix = d.asDiagonal() * s.matrix * d.asDiagonal();
  s.symmetrized = d.asDiagonal() * s.symmetrized * d.asDiagonal();
}

MatchingSystem single_impl(double a, bool odd, const SpectralPoint& pt, const Truncation& tr,
                           Kind kind, bool threshold) {
  tr.validate();
  const int N = tr.N, J = tr.J;
  MatchingSystem s;
  s.kind = kind;
  s.threshold = threshold;
  s.point = pt;
  s.a = a;
  s.trunc = tr;
  s.table = mode_table(N, J);
  const ModeTable& t = *s.table;

  ModeWeights w = base_weights(pt, J);
  w.w_win.resize(J);
  w.w_win[0] = -2.0;
  for (int m = 2; m <= J; ++m) {
    const double nu = std::sqrt(w.nu_sq[m - 1]);
    w.w_win[m - 1] = window_weight(odd, nu, m - 0.5, a, pt.lambda);
  }
  Eigen::MatrixXd Y = t.Y0 + gram(t.A, w.w_out) + gram(t.B, w.w_win);
  add_tail(Y, t, w.tail);

  s.edge_even = even_edge(w.nu_sq[0], a);
  s.edge_odd = odd_edge(w.nu_sq[0], a);
  const EdgePair& e = odd ? s.edge_odd : s.edge_even;
  const double k1 = w.kappa[0];

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N + 2, N + 2);
  K.topLeftCorner(N, N) = Y;
  K.block(0, N, N, 1) = -t.A.col(0);
  K.block(0, N + 1, N, 1) = e.f * t.B.col(0);
  K.block(N, 0, 1, N) = t.A.col(0).transpose();
  K(N, N) = k1;
  K.block(N + 1, 0, 1, N) = t.B.col(0).transpose();
  K(N + 1, N + 1) = -e.fp;

  Eigen::MatrixXd S = K;
  S.row(N) *= -1.0;
  S.row(N + 1) *= e.f;

  s.matrix = K;
  s.symmetrized = S;
  s.weights = std::move(w);
  equilibrate(s, N);
  check_finite(s.matrix);
  return s;
}

}  // namespace

MatchingSystem assemble_single(const CanonicalConfig& cfg, const SpectralPoint& pt,
                               const Truncation& trunc) {
  if (is_two_window(cfg.kind())) throw std::invalid_argument("assemble_single: single-window kind required");
  check_point(pt);
  return single_impl(cfg.a(), is_odd(cfg.kind()), pt, trunc, cfg.kind(), false);
}

MatchingSystem assemble_single(const CanonicalConfig& cfg, double lambda, const Truncation& trunc) {
  return assemble_single(cfg, SpectralPoint::from_lambda(lambda), trunc);
}

MatchingSystem assemble_threshold(double a, bool odd, const Truncation& trunc) {
  if (!(a > 0.0)) throw GeometryError("constraint violated: a > 0");
  return single_impl(a, odd, SpectralPoint::from_gap(0.0), trunc,
                     odd ? Kind::SingleWindowOdd : Kind::SingleWindowEven, true);
}

MatchingSystem assemble_two_window(const CanonicalConfig& cfg, const SpectralPoint& pt,
                                   const Truncation& tr) {
  if (!is_two_window(cfg.kind())) throw std::invalid_argument("assemble_two_window: two-window kind required");
  cfg.base.validate();
  check_point(pt);
  tr.validate();
  const bool odd = is_odd(cfg.kind());
  const double a = cfg.a(), l = cfg.l(), xL = l - a;
  const int N = tr.N, J = tr.J;

  MatchingSystem s;
  s.kind = cfg.kind();
  s.point = pt;
  s.a = a;
  s.l = l;
  s.trunc = tr;
  s.table = mode_table(N, J);
  const ModeTable& t = *s.table;

  ModeWeights w = base_weights(pt, J);
  w.rho.resize(J);
  w.w_inner.resize(J);
  w.w_win.resize(J);
  w.w_cross.resize(J);
  for (int j = 1; j <= J; ++j) {
    const double k = w.kappa[j - 1];
    w.rho[j - 1] = inner_rate(odd, k, xL);
    if (j == 1) {
      w.w_inner[0] = -1.0;
      continue;
    }
    const double e = std::exp(2.0 * k * xL);
    const double corr = odd ? -2.0 / ((e + 1.0) * k) : 2.0 / (std::expm1(2.0 * k * xL) * k);
    w.w_inner[j - 1] = corr + w.w_out[j - 1];
  }
  w.w_win[0] = -2.0;
  w.w_cross[0] = 0.0;
  for (int m = 2; m <= J; ++m) {
    const double nu = std::sqrt(w.nu_sq[m - 1]);
    const double p = m - 0.5;
    w.w_win[m - 1] = 0.5 * (window_weight(false, nu, p, a, pt.lambda) +
                            window_weight(true, nu, p, a, pt.lambda));
    w.w_cross[m - 1] = 1.0 / (nu * std::sinh(2.0 * nu * a));
  }

  const Eigen::MatrixXd Ws = gram(t.B, w.w_win);
  Eigen::MatrixXd YI = t.Y0 + gram(t.A, w.w_inner) + Ws;
  Eigen::MatrixXd YO = t.Y0 + gram(t.A, w.w_out) + Ws;
  add_tail(YI, t, w.tail);
  add_tail(YO, t, w.tail);
  const Eigen::MatrixXd Wd = gram(t.B, w.w_cross);

  s.edge_even = even_edge(w.nu_sq[0], a);
  s.edge_odd = odd_edge(w.nu_sq[0], a);
  const EdgePair& ce = s.edge_even;
  const EdgePair& so = s.edge_odd;
  const Eigen::VectorXd a1 = t.A.col(0), b1 = t.B.col(0);
  const int iC = 2 * N, iB = 2 * N + 1, iE = 2 * N + 2, iO = 2 * N + 3;

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * N + 4, 2 * N + 4);
  K.block(0, 0, N, N) = YI;
  K.block(0, N, N, N) = -Wd;
  K.block(N, 0, N, N) = -Wd;
  K.block(N, N, N, N) = YO;
  K.block(0, iC, N, 1) = a1;
  K.block(N, iB, N, 1) = -a1;
  K.block(0, iE, N, 1) = -ce.f * b1;
  K.block(N, iE, N, 1) = ce.f * b1;
  K.block(0, iO, N, 1) = so.f * b1;
  K.block(N, iO, N, 1) = so.f * b1;
  K.block(iC, 0, 1, N) = a1.transpose();
  K(iC, iC) = -w.rho[0];
  K.block(iB, N, 1, N) = a1.transpose();
  K(iB, iB) = w.kappa[0];
  // window flux at the right edge, then the left edge
  K.block(iE, N, 1, N) = b1.transpose();
  K(iE, iE) = -ce.fp;
  K(iE, iO) = -so.fp;
  K.block(iO, 0, 1, N) = b1.transpose();
  K(iO, iE) = ce.fp;
  K(iO, iO) = -so.fp;

  Eigen::MatrixXd S = K;
  S.row(iB) *= -1.0;
  const Eigen::RowVectorXd right = K.row(iE), left = K.row(iO);
  S.row(iE) = ce.f * (right - left);
  S.row(iO) = so.f * (right + left);

  s.matrix = K;
  s.symmetrized = S;
  s.weights = std::move(w);
  equilibrate(s, 2 * N);
  check_finite(s.matrix);
  return s;
}

MatchingSystem assemble_two_window(const CanonicalConfig& cfg, double lambda, const Truncation& trunc) {
  return assemble_two_window(cfg, SpectralPoint::from_lambda(lambda), trunc);
}

MatchingSystem assemble(const CanonicalConfig& cfg, const SpectralPoint& pt, const Truncation& trunc) {
  if (is_two_window(cfg.kind())) return assemble_two_window(cfg, pt, trunc);
  return assemble_single(cfg, pt, trunc);
}

int det_sign(const Eigen::MatrixXd& K) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  const Eigen::MatrixXd& U = lu.matrixLU();
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (int i = 0; i < U.rows(); ++i) {
    const double u = U(i, i);
    if (u == 0.0) return 0;
    if (u < 0) sign = -sign;
  }
  return sign;
}

Merit merit(const Eigen::MatrixXd& K) {
  if (!K.allFinite()) throw std::runtime_error("merit: non-finite entries");
  Merit m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
  const auto& sv = svd.singularValues();
  m.s_max = sv.size() ? sv[0] : 0.0;
  m.s_min = sv.size() ? sv[sv.size() - 1] : 0.0;
  m.det_sign = det_sign(K);
  return m;
}

Merit merit(const MatchingSystem& sys) { return merit(sys.matrix); }

Eigen::VectorXd kernel_vector(const MatchingSystem& sys) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullV);
  Eigen::VectorXd v = svd.matrixV().col(sys.matrix.cols() - 1);
  return sys.unscale(v);
}

}  // namespace modeguide
