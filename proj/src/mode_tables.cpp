#include "modeguide/mode_tables.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modeguide/geometry.hpp"
#include "modeguide/quadrature.hpp"

namespace modeguide {

void even_chebyshev(int N, double s, double* out) {
  if (N <= 0) return;
  double tkm1 = 1.0, tk = s;  // T_0, T_1
  out[0] = 1.0;
  for (int k = 1; k <= 2 * N - 2; ++k) {
    if (k % 2 == 0) out[k / 2] = tk;
    const double next = 2.0 * s * tk - tkm1;
    tkm1 = tk;
    tk = next;
  }
}

namespace {

double log_sinc(double z) {
  if (std::abs(z) < 1e-4) return -z * z / 6.0 - z * z * z * z / 180.0;
  return std::log(std::sin(z) / z);
}

// integral of T_k over [-1, 1]
double int_cheb(long k) {
  if (k % 2 != 0) return 0.0;
  const double kk = double(k);
  return 2.0 / (1.0 - kk * kk);
}

Eigen::MatrixXd chebyshev_at(int N, const std::vector<double>& s) {
  Eigen::MatrixXd P(N, s.size());
  std::vector<double> buf(N);
  for (size_t q = 0; q < s.size(); ++q) {
    even_chebyshev(N, s[q], buf.data());
    for (int i = 0; i < N; ++i) P(i, q) = buf[i];
  }
  return P;
}

}  // namespace

Eigen::MatrixXd baseline_gram(int N) {
  // -4 * int int P_i P_k ln|s-t| over [-1,1]^2, Chebyshev expansion of the log kernel
  const long K = 20000;
  Eigen::MatrixXd mu(N, K + 1);
  for (int i = 0; i < N; ++i)
    for (long n = 0; n <= K; ++n)
      mu(i, n) = 0.5 * (int_cheb(2 * i + n) + int_cheb(std::labs(2 * i - n)));
  Eigen::MatrixXd L = -std::log(2.0) * mu.col(0) * mu.col(0).transpose();
  Eigen::MatrixXd mw = mu.rightCols(K);
  for (long n = 1; n <= K; ++n) mw.col(n - 1) *= 2.0 / double(n);
  L -= mw * mu.rightCols(K).transpose();
  Eigen::MatrixXd Y = -4.0 * L;

  // smooth remainder over the box, 8 x [0,1]^2
  const int Q = 2 * N + 60;
  QuadRule g = gauss_legendre(Q);
  Eigen::MatrixXd P = chebyshev_at(N, g.x);
  Eigen::MatrixXd Pw = P;
  for (int q = 0; q < Q; ++q) Pw.col(q) *= g.w[q];
  Eigen::MatrixXd Sm(Q, Q);
  for (int p = 0; p < Q; ++p)
    for (int q = 0; q < Q; ++q) {
      const double s2 = g.x[p] * g.x[p], t2 = g.x[q] * g.x[q];
      Sm(p, q) = log_sinc(kPi * (2.0 - s2 - t2) / 4.0) - log_sinc(kPi * (s2 - t2) / 4.0);
    }
  Y += 8.0 * Pw * Sm * Pw.transpose();

  // ln(2 - s^2 - t^2): Duffy split at the corner (1,1); sigma = z^2, tau = sigma r
  Eigen::MatrixXd Mx = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> ps(N), pt(N);
  Eigen::MatrixXd Ps(N, Q), Pt(N, Q);
  for (int a = 0; a < Q; ++a) {
    const double z = g.x[a];
    const double sig = z * z;
    const double dsig = 2.0 * z * g.w[a];
    even_chebyshev(N, 1.0 - sig, ps.data());
    for (int b = 0; b < Q; ++b) {
      const double r = g.x[b];
      const double wgt = dsig * g.w[b] * sig;
      const double f = std::log(sig) + std::log((2.0 - sig) + r * (2.0 - sig * r));
      even_chebyshev(N, 1.0 - sig * r, pt.data());
      for (int i = 0; i < N; ++i) {
        Ps(i, b) = ps[i] * wgt * f;
        Pt(i, b) = pt[i];
      }
    }
    Mx += Ps * Pt.transpose();
  }
  Y += 8.0 * (Mx + Mx.transpose());
  const Eigen::MatrixXd S = 0.5 * (Y + Y.transpose());
  return S;
}

std::shared_ptr<const ModeTable> build_mode_table(int N, int J) {
  if (N < 1 || J < 2) throw std::invalid_argument("mode_table: N >= 1 and J >= 2 required");
  auto t = std::make_shared<ModeTable>();
  t->N = N;
  t->J = J;
  const int Q = static_cast<int>(std::ceil(kPi * J)) + 200;
  QuadRule g = gauss_legendre(Q);
  Eigen::MatrixXd Pw = chebyshev_at(N, g.x);
  for (int q = 0; q < Q; ++q) Pw.col(q) *= g.w[q];
  Eigen::MatrixXd S(Q, J), C(Q, J);
  for (int q = 0; q < Q; ++q) {
    const double th = kPi * g.x[q] * g.x[q];
    for (int j = 1; j <= J; ++j) {
      S(q, j - 1) = std::sin(j * th);
      C(q, j - 1) = std::cos((j - 0.5) * th);
    }
  }
  const double c = 2.0 * std::sqrt(2.0);
  t->A = c * Pw * S;
  t->B = c * Pw * C;
  t->Y0 = baseline_gram(N);
  t->P0.resize(N);
  for (int i = 0; i < N; ++i) t->P0[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return t;
}

std::shared_ptr<const ModeTable> mode_table(int N, int J) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeTable>> cache;
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find({N, J});
    if (it != cache.end()) return it->second;
  }
  auto t = build_mode_table(N, J);
  std::lock_guard<std::mutex> lk(mtx);
  auto [it, inserted] = cache.emplace(std::make_pair(N, J), t);
  return it->second;
}

}  // namespace modeguide
