#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <vector>

#include "modeguide/geometry.hpp"

namespace modeguide {

enum class FarFace { Dirichlet, Neumann };

// Half-domain [0, L] x [0, pi]; the plane x1 = 0 carries the parity condition.
struct OracleConfig {
  double L = 13.0;
  double h = 1.0 / 64.0;
  int k = 3;
  FarFace far = FarFace::Dirichlet;
  double sigma = 0.2;  // shift for shift-invert
  std::uint64_t seed = 1;
  double tol = 1e-10;
};

struct FdOperator {
  Eigen::SparseMatrix<double> A;  // symmetric, mass-scaled 5-point operator
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  // discrete threshold of the Dirichlet strip cross-section
  double threshold() const;
};

FdOperator discretize(const CanonicalConfig& cfg, const OracleConfig& ocfg);

struct LanczosInfo {
  int iterations = 0;
  int restarts = 0;
  double max_residual = 0.0;
};

std::vector<double> lowest_eigenvalues(const FdOperator& op, int k, const OracleConfig& ocfg,
                                       LanczosInfo* info = nullptr);
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& A, int k, double sigma,
                                       std::uint64_t seed, double tol, LanczosInfo* info = nullptr);

// number of eigenvalues strictly below tau, by LDL^T inertia
int count_below(const Eigen::SparseMatrix<double>& A, double tau);

struct Extrapolation {
  double value = 0.0;
  double error_bound = 0.0;
  double order = 0.0;
  bool flagged = false;
};

// values on grids h, h/2, h/4, ... (two or more)
Extrapolation refine_and_extrapolate(const std::vector<double>& values);

// lowest k eigenvalues of the sector described by cfg
std::vector<double> oracle_eigenvalues(const CanonicalConfig& cfg, const OracleConfig& ocfg);

// odd sector, Neumann far face: lowest eigenvalue minus the discrete threshold
double threshold_gap(double a, double h, double L_extra = 10.0);

struct CriticalCrossing {
  double a = 0.0;
  double a_lo = 0.0, a_hi = 0.0;  // grid-aligned bracket
  double gap_lo = 0.0, gap_hi = 0.0;
  bool found = false;
};

// first sign change of threshold_gap over grid-aligned a in [a_start, a_stop]
CriticalCrossing critical_crossing(double h, double a_start, double a_stop, double a_step);

}  // namespace modeguide
