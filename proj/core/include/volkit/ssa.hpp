#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "volkit/labels.hpp"

namespace volkit::ssa {

/// Parameters of the rolling SSA direction forecast.
struct SsaConfig {
  int window_length = 3;    // L, lagged-vector length
  int series_window = 30;   // W, observations handed to each forecast
  int component_index = 0;  // S, trend component used by the sign rule

  /// Enforces L >= 2, L < W, 0 <= S < L.
  void validate() const;
};

/// Eigen-structure of the trajectory matrix X (L x K, K = N-L+1) whose
/// columns are the length-L lagged windows of the source series.
struct SsaDecomposition {
  /// Descending, negatives from the symmetric solver clamped to 0.
  /// Sums to |X|_F^2.
  Eigen::VectorXd eigenvalues;
  /// L x L, orthonormal columns; column i pairs with eigenvalues[i].
  /// Sign fixed so each column's largest-magnitude entry is positive.
  Eigen::MatrixXd eigenvectors;
  /// K x L; column i = X^T u_i / sqrt(lambda_i), zero where lambda_i = 0.
  Eigen::MatrixXd factor_vectors;
  std::size_t source_length = 0;  // N
  int window_length = 0;          // L

  /// Count of eigenvalues above rel_tol * largest.
  int rank(double rel_tol = 1e-9) const;
};

/// Eigendecomposition of XX^T. Requires N >= L+1, finite input, L >= 2.
SsaDecomposition decompose(std::span<const double> series, int window_length);

/// Sum of the selected rank-1 terms sqrt(lambda_i) u_i v_i^T, projected
/// back to a length-N series by anti-diagonal averaging. Duplicate indices
/// are counted once. Selecting every component returns the source series.
std::vector<double> reconstruct(const SsaDecomposition& decomp,
                                const std::vector<int>& components);

/// Direction rule: reconstruct component S of the window and compare its
/// mean against the window mean. Higher trend mean -> increase (class I);
/// lower or exactly equal -> decrease (class II).
evaluate::ClassLabel ssa_forecast_sign(std::span<const double> window, const SsaConfig& config);

}  // namespace volkit::ssa
