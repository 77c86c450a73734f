#include "modeguide/oracle_fd.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "modeguide/simd.hpp"
#include "modeguide/solver.hpp"

namespace modeguide {

double FdOperator::threshold() const {
  const double s = std::sin(0.5 * hy);
  return 4.0 / (hy * hy) * s * s;
}

namespace {

long aligned(double v, double h, const char* what) {
  const double q = v / h;
  const long n = std::lround(q);
  if (std::abs(q - n) > 1e-9 * std::max(1.0, std::abs(q))) {
    std::ostringstream os;
    os << "grid alignment violated: " << what << " = " << v << " is not a multiple of h = " << h;
    throw GeometryError(os.str());
  }
  return n;
}

}  // namespace

FdOperator discretize(const CanonicalConfig& cfg, const OracleConfig& oc) {
  cfg.base.validate();
  const double h = oc.h;
  if (!(h > 0)) throw GeometryError("constraint violated: h > 0");
  const double a = cfg.a();
  const bool two = is_two_window(cfg.kind());
  const double x0 = two ? cfg.l() - a : 0.0;
  const double x1 = two ? cfg.l() + a : a;
  const long ia = aligned(a, h, "a");
  const long i0 = two ? aligned(x0, h, "l - a") : 0;
  const long i1 = i0 + (two ? 2 * ia : ia);
  const long nx = aligned(oc.L, h, "L");
  if (x1 >= oc.L) throw GeometryError("constraint violated: L > window end");

  FdOperator op;
  op.nx = static_cast<int>(nx);
  op.ny = static_cast<int>(std::lround(kPi / h));
  op.hx = h;
  op.hy = kPi / op.ny;
  const int ny = op.ny;
  const bool odd = is_odd(cfg.kind());
  const bool farN = oc.far == FarFace::Neumann;

  std::vector<long> idx((nx + 1) * (ny + 1), -1);
  auto at = [&](long i, long k) -> long& { return idx[i * (ny + 1) + k]; };
  long n = 0;
  for (long i = 0; i <= nx; ++i)
    for (long k = 0; k <= ny; ++k) {
      bool free = k < ny;
      if (i == nx && !farN) free = false;
      if (i == 0 && odd) free = false;
      if (k == 0) {
        const bool in_window = two ? (i > i0 && i < i1) : (i < i1);
        if (!in_window) free = false;
        if (two && i == 0) free = false;
      }
      if (free) at(i, k) = n++;
    }

  std::vector<double> sc(n);
  for (long i = 0; i <= nx; ++i)
    for (long k = 0; k <= ny; ++k) {
      const long r = at(i, k);
      if (r < 0) continue;
      const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
      const double wy = (k == 0) ? 0.5 : 1.0;
      sc[r] = 1.0 / std::sqrt(wx * wy);
    }

  std::vector<double> diag(n, 0.0);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  auto edge = [&](long i1_, long k1, long i2, long k2, double w) {
    const long r1 = at(i1_, k1), r2 = at(i2, k2);
    if (r1 >= 0) diag[r1] += w;
    if (r2 >= 0) diag[r2] += w;
    if (r1 >= 0 && r2 >= 0) {
      const double v = -w * (sc[r1] * sc[r2]);
      trip.emplace_back(r1, r2, v);
      trip.emplace_back(r2, r1, v);
    }
  };
  const double ihx2 = 1.0 / (op.hx * op.hx), ihy2 = 1.0 / (op.hy * op.hy);
  for (long i = 0; i <= nx; ++i)
    for (long k = 0; k <= ny; ++k) {
      if (i < nx) edge(i, k, i + 1, k, (k == 0 || k == ny ? 0.5 : 1.0) * ihx2);
      if (k < ny) edge(i, k, i, k + 1, (i == 0 || i == nx ? 0.5 : 1.0) * ihy2);
    }
  for (long r = 0; r < n; ++r) trip.emplace_back(r, r, diag[r] * sc[r] * sc[r]);
  op.A.resize(n, n);
  op.A.setFromTriplets(trip.begin(), trip.end());
  op.A.makeCompressed();
  return op;
}

std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& A, int k, double sigma,
                                       std::uint64_t seed, double tol, LanczosInfo* info) {
  const long n = A.rows();
  if (k < 1 || k > n) throw std::invalid_argument("lowest_eigenvalues: 1 <= k <= n");
  Eigen::SparseMatrix<double> S = A;
  for (long i = 0; i < n; ++i) S.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw NonConvergence("lowest_eigenvalues: factorization failed");

  const int mmax = static_cast<int>(std::min<long>(n, std::max(3 * k + 30, 80)));
  Eigen::MatrixXd V(n, mmax + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v0(n);
  for (long i = 0; i < n; ++i) v0[i] = nd(rng);

  LanczosInfo li;
  std::vector<double> result;
  for (int restart = 0; restart < 30; ++restart) {
    V.col(0) = v0 / v0.norm();
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(n);
    bool done = false;
    int m = 0;
    Eigen::VectorXd theta;
    Eigen::MatrixXd Sv;
    for (int j = 0; j < mmax; ++j) {
      w = ldlt.solve(V.col(j));
      const double aj = simd::dot(w.data(), V.col(j).data(), n);
      alpha.push_back(aj);
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const double c = simd::dot(V.col(i).data(), w.data(), n);
          simd::axpy(-c, V.col(i).data(), w.data(), n);
        }
      const double bj = w.norm();
      beta.push_back(bj);
      m = j + 1;
      ++li.iterations;
      const bool check = (m >= k + 2 && m % 5 == 0) || m == mmax || bj < 1e-14;
      if (check) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          T(i, i) = alpha[i];
          if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        theta = es.eigenvalues();
        Sv = es.eigenvectors();
        const int kk = std::min(k, m);
        double worst = 0.0;
        for (int q = 0; q < kk; ++q) {
          const int c = m - 1 - q;
          const double res = std::abs(bj * Sv(m - 1, c)) / std::abs(theta[c]);
          worst = std::max(worst, res);
        }
        li.max_residual = worst;
        if ((worst < tol && kk == k) || bj < 1e-14) {
          done = true;
          break;
        }
      }
      if (j + 1 < mmax + 1) V.col(j + 1) = w / bj;
    }
    if (done) {
      result.clear();
      for (int q = 0; q < k; ++q) result.push_back(sigma + 1.0 / theta[m - 1 - q]);
      std::sort(result.begin(), result.end());
      break;
    }
    // explicit restart from the sum of the wanted Ritz vectors
    v0.setZero();
    for (int q = 0; q < k; ++q) v0 += V.leftCols(m) * Sv.col(m - 1 - q);
    ++li.restarts;
  }
  if (info) *info = li;
  if (result.empty()) {
    std::ostringstream os;
    os << "Lanczos did not converge: iterations=" << li.iterations << " restarts=" << li.restarts
       << " residual=" << li.max_residual;
    throw NonConvergence(os.str());
  }
  return result;
}

std::vector<double> lowest_eigenvalues(const FdOperator& op, int k, const OracleConfig& oc,
                                       LanczosInfo* info) {
  return lowest_eigenvalues(op.A, k, oc.sigma, oc.seed, oc.tol, info);
}

int count_below(const Eigen::SparseMatrix<double>& A, double tau) {
  Eigen::SparseMatrix<double> S = A;
  for (long i = 0; i < S.rows(); ++i) S.coeffRef(i, i) -= tau;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw NonConvergence("count_below: factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  int c = 0;
  for (long i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) throw NonConvergence("count_below: zero pivot, shift is an eigenvalue");
    if (d[i] < 0) ++c;
  }
  return c;
}

Extrapolation refine_and_extrapolate(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("refine_and_extrapolate: two or more grids required");
  Extrapolation e;
  const size_t n = v.size();
  const double fine = v[n - 1], mid = v[n - 2];
  e.error_bound = std::abs(fine - mid);
  if (n == 2) {
    e.order = 2.0;
    e.value = fine + (fine - mid) / 3.0;
    return e;
  }
  const double d1 = v[n - 3] - mid, d2 = mid - fine;
  if (d2 == 0.0) {
    e.value = fine;
    e.order = 0.0;
    e.flagged = d1 != 0.0;
    return e;
  }
  const double ratio = d1 / d2;
  if (!(ratio > 1.0)) {
    e.flagged = true;
    e.value = fine;
    e.order = 0.0;
    return e;
  }
  e.order = std::log2(ratio);
  e.value = fine + (fine - mid) / (std::pow(2.0, e.order) - 1.0);
  return e;
}

std::vector<double> oracle_eigenvalues(const CanonicalConfig& cfg, const OracleConfig& oc) {
  const FdOperator op = discretize(cfg, oc);
  return lowest_eigenvalues(op, oc.k, oc);
}

double threshold_gap(double a, double h, double L_extra) {
  OracleConfig oc;
  oc.h = h;
  oc.L = a + L_extra;
  oc.far = FarFace::Neumann;
  oc.k = 1;
  const FdOperator op = discretize(canonical(a, Kind::SingleWindowOdd), oc);
  return lowest_eigenvalues(op, 1, oc)[0] - op.threshold();
}

CriticalCrossing critical_crossing(double h, double a_start, double a_stop, double a_step) {
  CriticalCrossing c;
  double prev_a = a_start;
  double prev_g = threshold_gap(a_start, h);
  for (double a = a_start + a_step; a <= a_stop + 1e-12; a += a_step) {
    const double g = threshold_gap(a, h);
    if (prev_g > 0 && g <= 0) {
      c.found = true;
      c.a_lo = prev_a;
      c.a_hi = a;
      c.gap_lo = prev_g;
      c.gap_hi = g;
      c.a = prev_a - prev_g * (a - prev_a) / (g - prev_g);
      return c;
    }
    prev_a = a;
    prev_g = g;
  }
  return c;
}

}  // namespace modeguide
