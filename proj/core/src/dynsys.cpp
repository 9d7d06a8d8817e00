#include "volkit/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volkit/errors.hpp"

namespace volkit::dynsys {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

void EmbedConfig::validate() const {
  if (dim < 1) fail("bad-config", "embedding dimension must be >= 1");
  if (lag < 1) fail("bad-config", "embedding lag must be >= 1");
  if (max_steps < 1) fail("bad-config", "max steps must be >= 1");
  if (fit_min < 0 || fit_min >= fit_max || fit_max > max_steps) {
    fail("bad-config", "fit range must satisfy 0 <= fit_min < fit_max <= max_steps");
  }
}

Eigen::MatrixXd delay_embed(std::span<const double> series, int dim, int lag) {
  if (dim < 1) fail("bad-config", "embedding dimension must be >= 1");
  if (lag < 1) fail("bad-config", "embedding lag must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  const std::int64_t count = n - static_cast<std::int64_t>(dim - 1) * lag;
  if (count < 1) {
    fail("series-too-short", "need at least " + std::to_string((dim - 1) * lag + 1) +
                                 " samples for dim=" + std::to_string(dim) +
                                 " lag=" + std::to_string(lag) + ", got " + std::to_string(n));
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (!std::isfinite(series[static_cast<std::size_t>(i)])) {
      fail("non-finite-input", "sample " + std::to_string(i) + " is not finite");
    }
  }
  Eigen::MatrixXd points(dim, count);
  for (std::int64_t j = 0; j < count; ++j) {
    for (int r = 0; r < dim; ++r) {
      points(r, j) = series[static_cast<std::size_t>(j + static_cast<std::int64_t>(r) * lag)];
    }
  }
  return points;
}

LyapunovEstimate estimate_lambda1(std::span<const double> series, const EmbedConfig& config) {
  config.validate();
  const Eigen::MatrixXd points = delay_embed(series, config.dim, config.lag);
  const std::int64_t count = points.cols();
  if (count < 2) fail("series-too-short", "need at least 2 embedded points");
  const std::int64_t theiler = config.resolved_theiler();

  // Exact nearest-neighbor search; zero-distance candidates are skipped so
  // every pair has a defined log distance at step 0.
  std::vector<std::int64_t> neighbor(static_cast<std::size_t>(count), -1);
  bool any_positive_distance = false;
  for (std::int64_t j = 0; j < count; ++j) {
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_index = -1;
    for (std::int64_t i = 0; i < count; ++i) {
      if (std::abs(i - j) <= theiler) continue;
      const double d2 = (points.col(i) - points.col(j)).squaredNorm();
      if (d2 <= 0.0) continue;
      if (d2 < best) {
        best = d2;
        best_index = i;
      }
    }
    neighbor[static_cast<std::size_t>(j)] = best_index;
    if (best_index >= 0) any_positive_distance = true;
  }
  if (!any_positive_distance) {
    bool all_identical = true;
    for (std::int64_t i = 1; i < count && all_identical; ++i) {
      all_identical = (points.col(i) - points.col(0)).squaredNorm() == 0.0;
    }
    if (all_identical) fail("degenerate-geometry", "all embedded points are identical");
    fail("no-neighbor-pairs", "no neighbor candidate survives the Theiler exclusion");
  }

  const std::size_t n_steps = static_cast<std::size_t>(config.max_steps) + 1;
  std::vector<double> sums(n_steps, 0.0);
  std::vector<std::int64_t> counts(n_steps, 0);
  std::int64_t n_pairs = 0;
  for (std::int64_t j = 0; j < count; ++j) {
    const std::int64_t nb = neighbor[static_cast<std::size_t>(j)];
    if (nb < 0) continue;
    ++n_pairs;
    const std::int64_t horizon =
        std::min<std::int64_t>(config.max_steps, count - 1 - std::max(j, nb));
    for (std::int64_t k = 0; k <= horizon; ++k) {
      const double d2 = (points.col(j + k) - points.col(nb + k)).squaredNorm();
      if (d2 <= 0.0) continue;  // crossing trajectories have no log distance
      sums[static_cast<std::size_t>(k)] += 0.5 * std::log(d2);
      ++counts[static_cast<std::size_t>(k)];
    }
  }

  LyapunovEstimate out;
  out.n_pairs = n_pairs;
  out.divergence_curve.assign(n_steps, kNan);
  out.curve_pairs = counts;
  for (std::size_t k = 0; k < n_steps; ++k) {
    if (counts[k] > 0) out.divergence_curve[k] = sums[k] / static_cast<double>(counts[k]);
  }

  // Least-squares line over the finite curve points in the fit range.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::int64_t m = 0;
  for (int k = config.fit_min; k <= config.fit_max; ++k) {
    const double y = out.divergence_curve[static_cast<std::size_t>(k)];
    if (std::isnan(y)) continue;
    const double x = static_cast<double>(k);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  if (m < 2) {
    fail("no-neighbor-pairs", "divergence curve supports fewer than 2 points in the fit range");
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  out.lambda1 = (static_cast<double>(m) * sxy - sx * sy) / denom;
  out.intercept = (sy - out.lambda1 * sx) / static_cast<double>(m);
  const double ss_tot = syy - sy * sy / static_cast<double>(m);
  double ss_res = 0.0;
  for (int k = config.fit_min; k <= config.fit_max; ++k) {
    const double y = out.divergence_curve[static_cast<std::size_t>(k)];
    if (std::isnan(y)) continue;
    const double e = y - (out.intercept + out.lambda1 * static_cast<double>(k));
    ss_res += e * e;
  }
  out.fit_r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return out;
}

int autocorr_lag(std::span<const double> series, double threshold) {
  const std::size_t n = series.size();
  if (n < 3) fail("series-too-short", "need at least 3 samples to pick a lag");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  if (c0 <= 0.0) fail("zero-variance", "constant series has no autocorrelation");
  for (std::size_t k = 1; k + 1 < n; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) ck += (series[t] - mean) * (series[t + k] - mean);
    if (ck / c0 < threshold) return static_cast<int>(k);
  }
  return 1;
}

std::vector<ConvergenceRow> convergence_study(std::span<const double> series,
                                              std::vector<std::int64_t> n_grid,
                                              const EmbedConfig& config) {
  std::sort(n_grid.begin(), n_grid.end());
  n_grid.erase(std::unique(n_grid.begin(), n_grid.end()), n_grid.end());

  std::vector<ConvergenceRow> rows;
  rows.reserve(n_grid.size());
  for (std::int64_t n : n_grid) {
    ConvergenceRow row;
    row.n = n;
    row.lambda1 = kNan;
    row.fit_r2 = kNan;
    try {
      if (n < 1 || static_cast<std::size_t>(n) > series.size()) {
        fail("series-too-short", "prefix length " + std::to_string(n) +
                                     " exceeds series length " + std::to_string(series.size()));
      }
      const LyapunovEstimate est =
          estimate_lambda1(series.subspan(0, static_cast<std::size_t>(n)), config);
      row.lambda1 = est.lambda1;
      row.fit_r2 = est.fit_r2;
      row.status = "ok";
    } catch (const Error& e) {
      row.status = e.id();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

evaluate::ClassLabel lyapunov_forecast_sign(const LyapunovEstimate& estimate) {
  return estimate.lambda1 > 0.0 ? evaluate::ClassLabel::increase
                                : evaluate::ClassLabel::decrease;
}

}  // namespace volkit::dynsys
