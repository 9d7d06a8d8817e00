#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "volkit/labels.hpp"

namespace volkit::dynsys {

/// Delay-embedding and divergence-fit parameters.
struct EmbedConfig {
  int dim = 3;        // embedding dimension m
  int lag = 1;        // delay tau, in samples
  int theiler = -1;   // temporal exclusion; -1 resolves to dim * lag
  int max_steps = 100;  // divergence horizon, in samples
  int fit_min = 0;    // slope fitted over steps [fit_min, fit_max]
  int fit_max = 25;

  int resolved_theiler() const { return theiler < 0 ? dim * lag : theiler; }
  void validate() const;
};

/// Largest-exponent estimate in units of 1/sample (divide by the sampling
/// interval for 1/time). divergence_curve[k] is the mean of ln d_j(k) over
/// surviving neighbor pairs, NaN where no pair reached step k;
/// curve_pairs[k] is that pair count. Both have max_steps + 1 entries.
struct LyapunovEstimate {
  double lambda1 = 0.0;
  double intercept = 0.0;  // estimates ln of the initial separation scale
  double fit_r2 = 0.0;
  std::int64_t n_pairs = 0;
  std::vector<double> divergence_curve;
  std::vector<std::int64_t> curve_pairs;

  /// A saturated or noisy curve fits the line poorly; treat as unreliable.
  bool low_confidence() const { return fit_r2 < 0.9; }
};

/// point_j = (x_j, x_{j+tau}, ..., x_{j+(m-1)tau}) stored as column j.
/// Column count = N - (m-1) tau; requires that to be >= 1.
Eigen::MatrixXd delay_embed(std::span<const double> series, int dim, int lag);

/// Nearest-neighbor divergence method: each embedded point is paired with
/// its closest point at positive distance whose index differs by more than
/// the Theiler window; pair distances are followed for max_steps samples;
/// lambda1 is the least-squares slope of the mean log-distance curve over
/// [fit_min, fit_max]. Exact search, deterministic tie-break toward the
/// smaller index.
LyapunovEstimate estimate_lambda1(std::span<const double> series, const EmbedConfig& config);

/// First lag whose autocorrelation falls below the threshold (default 1/e);
/// falls back to 1 when no lag qualifies. Errors on zero-variance input.
int autocorr_lag(std::span<const double> series, double threshold = 0.36787944117144233);

/// One prefix length of a convergence study. status is "ok" or the error
/// id that aborted that row; lambda1/fit_r2 are NaN for failed rows.
struct ConvergenceRow {
  std::int64_t n = 0;
  double lambda1 = 0.0;
  double fit_r2 = 0.0;
  std::string status;
};

/// Runs estimate_lambda1 on each prefix series[0..n). The grid is sorted
/// ascending and deduplicated; per-row failures are recorded, not thrown.
std::vector<ConvergenceRow> convergence_study(std::span<const double> series,
                                              std::vector<std::int64_t> n_grid,
                                              const EmbedConfig& config);

/// lambda1 > 0 -> increase (class I); <= 0 -> decrease (class II).
evaluate::ClassLabel lyapunov_forecast_sign(const LyapunovEstimate& estimate);

}  // namespace volkit::dynsys
