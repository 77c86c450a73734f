#pragma once

#include <Eigen/Dense>
#include <memory>

namespace modeguide {

// Interface flux basis g_i(y) = y^{-1/2} T_i(2y/pi - 1), i < N, paired against
// the region modes sqrt(2/pi) sin(j y) and sqrt(2/pi) cos((m-1/2) y), j, m <= J.
struct ModeTable {
  int N = 0;
  int J = 0;
  Eigen::MatrixXd A;   // N x J, <g_i, sin mode j>
  Eigen::MatrixXd B;   // N x J, <g_i, cos mode m>
  Eigen::MatrixXd Y0;  // N x N, sum_j A A^T / j + sum_m B B^T / (m - 1/2), all modes
  Eigen::VectorXd P0;  // g_i weight at y -> 0, (-1)^i
};

// Thread-safe memoized table for (N, J).
std::shared_ptr<const ModeTable> mode_table(int N, int J);

std::shared_ptr<const ModeTable> build_mode_table(int N, int J);

// Chebyshev T_{2i}(s), i < N
void even_chebyshev(int N, double s, double* out);

// Closed-form part of Y0 alone (exposed for tests)
Eigen::MatrixXd baseline_gram(int N);

}  // namespace modeguide
