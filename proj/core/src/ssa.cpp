#include "volkit/ssa.hpp"

#include <cmath>
#include <string>

#include "volkit/errors.hpp"

namespace volkit::ssa {

void SsaConfig::validate() const {
  if (window_length < 2) fail("bad-config", "window length L must be >= 2");
  if (window_length >= series_window) {
    fail("bad-config", "L must be smaller than the series window W (got L=" +
                           std::to_string(window_length) +
                           ", W=" + std::to_string(series_window) + ")");
  }
  if (component_index < 0 || component_index >= window_length) {
    fail("bad-config", "component index S must satisfy 0 <= S < L");
  }
}

int SsaDecomposition::rank(double rel_tol) const {
  if (eigenvalues.size() == 0 || eigenvalues[0] <= 0.0) return 0;
  const double threshold = rel_tol * eigenvalues[0];
  int r = 0;
  while (r < eigenvalues.size() && eigenvalues[r] > threshold) ++r;
  return r;
}

SsaDecomposition decompose(std::span<const double> series, int window_length) {
  const std::size_t n = series.size();
  const int length = window_length;
  if (length < 2) fail("bad-config", "window length L must be >= 2");
  if (n <= static_cast<std::size_t>(length)) {
    fail("series-too-short", "need more than L=" + std::to_string(length) +
                                 " samples, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(series[i])) {
      fail("non-finite-input", "sample " + std::to_string(i) + " is not finite");
    }
  }

  const std::size_t k = n - static_cast<std::size_t>(length) + 1;
  Eigen::MatrixXd x(length, k);
  for (std::size_t col = 0; col < k; ++col) {
    for (int row = 0; row < length; ++row) x(row, col) = series[col + row];
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x * x.transpose());
  if (solver.info() != Eigen::Success) fail("degenerate-input", "eigensolver failed");

  SsaDecomposition out;
  out.source_length = n;
  out.window_length = length;
  out.eigenvalues.resize(length);
  out.eigenvectors.resize(length, length);
  out.factor_vectors = Eigen::MatrixXd::Zero(k, length);

  // Solver order is ascending; store descending with a fixed sign rule.
  for (int i = 0; i < length; ++i) {
    const int src = length - 1 - i;
    double lambda = solver.eigenvalues()[src];
    if (lambda < 0.0) lambda = 0.0;
    Eigen::VectorXd u = solver.eigenvectors().col(src);
    int pivot = 0;
    for (int j = 1; j < length; ++j) {
      if (std::abs(u[j]) > std::abs(u[pivot])) pivot = j;
    }
    if (u[pivot] < 0.0) u = -u;
    out.eigenvalues[i] = lambda;
    out.eigenvectors.col(i) = u;
    if (lambda > 0.0) out.factor_vectors.col(i) = x.transpose() * u / std::sqrt(lambda);
  }
  return out;
}

std::vector<double> reconstruct(const SsaDecomposition& decomp,
                                const std::vector<int>& components) {
  const int length = decomp.window_length;
  std::vector<char> selected(static_cast<std::size_t>(length), 0);
  for (int c : components) {
    if (c < 0 || c >= length) {
      fail("component-out-of-range",
           "component " + std::to_string(c) + " outside [0, " + std::to_string(length) + ")");
    }
    selected[static_cast<std::size_t>(c)] = 1;
  }

  const std::size_t n = decomp.source_length;
  const std::size_t k = n - static_cast<std::size_t>(length) + 1;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(length, k);
  for (int i = 0; i < length; ++i) {
    if (!selected[static_cast<std::size_t>(i)] || decomp.eigenvalues[i] <= 0.0) continue;
    sum.noalias() += std::sqrt(decomp.eigenvalues[i]) * decomp.eigenvectors.col(i) *
                     decomp.factor_vectors.col(i).transpose();
  }

  // Anti-diagonal averaging: series[t] = mean of sum(r, c) over r + c = t.
  std::vector<double> series(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t r_lo = t >= k ? t - k + 1 : 0;
    const std::size_t r_hi = std::min<std::size_t>(t, static_cast<std::size_t>(length) - 1);
    double acc = 0.0;
    for (std::size_t r = r_lo; r <= r_hi; ++r) acc += sum(static_cast<Eigen::Index>(r),
                                                          static_cast<Eigen::Index>(t - r));
    series[t] = acc / static_cast<double>(r_hi - r_lo + 1);
  }
  return series;
}

evaluate::ClassLabel ssa_forecast_sign(std::span<const double> window, const SsaConfig& config) {
  config.validate();
  if (window.size() != static_cast<std::size_t>(config.series_window)) {
    fail("bad-config", "window holds " + std::to_string(window.size()) +
                           " samples, expected W=" + std::to_string(config.series_window));
  }

  const SsaDecomposition decomp = decompose(window, config.window_length);
  const std::vector<double> trend = reconstruct(decomp, {config.component_index});

  double trend_sum = 0.0, window_sum = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    trend_sum += trend[i];
    window_sum += window[i];
  }
  const double n = static_cast<double>(window.size());
  return trend_sum / n > window_sum / n ? evaluate::ClassLabel::increase
                                        : evaluate::ClassLabel::decrease;
}

}  // namespace volkit::ssa
