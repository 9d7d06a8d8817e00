#include "volkit/garch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nelder_mead.hpp"
#include "volkit/errors.hpp"

namespace volkit::garch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2Pi = 1.8378770664093454835606594728112;

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail("non-finite-input", "sample " + std::to_string(i) + " is not finite");
    }
  }
}

double mean_square(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s / static_cast<double>(values.size());
}

void validate_order(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1 || p >= 100 || q >= 100) {
    fail("bad-config", "order must satisfy p, q >= 0, p + q >= 1, both below 100");
  }
}

/// theta[0] is log omega; the remaining q+p entries map through a logit
/// onto coefficients that are positive with sum strictly below 1, so every
/// candidate the optimizer visits is admissible.
struct ParamMap {
  int q;
  int p;

  void decode(const std::vector<double>& theta, double& omega, std::vector<double>& alpha,
              std::vector<double>& beta) const {
    omega = std::exp(std::clamp(theta[0], -700.0, 700.0));
    double denom = 1.0;
    std::vector<double> raw(static_cast<std::size_t>(q + p));
    for (int i = 0; i < q + p; ++i) {
      raw[static_cast<std::size_t>(i)] =
          std::exp(std::clamp(theta[static_cast<std::size_t>(1 + i)], -40.0, 40.0));
      denom += raw[static_cast<std::size_t>(i)];
    }
    alpha.resize(static_cast<std::size_t>(q));
    beta.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < q; ++i) alpha[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(i)] / denom;
    for (int i = 0; i < p; ++i) {
      beta[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(q + i)] / denom;
    }
  }

  std::vector<double> encode(double omega, const std::vector<double>& weights) const {
    double sum = 0.0;
    for (double w : weights) sum += w;
    std::vector<double> theta;
    theta.reserve(1 + weights.size());
    theta.push_back(std::log(omega));
    for (double w : weights) theta.push_back(std::log(w / (1.0 - sum)));
    return theta;
  }
};

}  // namespace

double GarchFit::persistence() const {
  double s = 0.0;
  for (double a : alpha) s += a;
  for (double b : beta) s += b;
  return s;
}

double GarchFit::unconditional_variance() const { return omega / (1.0 - persistence()); }

MeanModel fit_mean_model(std::span<const double> returns, int q) {
  if (q < 0) fail("bad-config", "MA order must be >= 0");
  const std::size_t n = returns.size();
  if (n < static_cast<std::size_t>(10 * (q + 1))) {
    fail("series-too-short", "need at least " + std::to_string(10 * (q + 1)) +
                                 " observations for MA(" + std::to_string(q) + "), got " +
                                 std::to_string(n));
  }
  require_finite(returns);

  double mean = 0.0;
  for (double v : returns) mean += v;
  mean /= static_cast<double>(n);

  MeanModel out;
  if (q == 0) {
    out.intercept = mean;
    out.residuals.reserve(n);
    for (double v : returns) out.residuals.push_back(v - mean);
    return out;
  }

  // Conditional sum of squares: errors before the sample start are zero.
  std::vector<double> errors(n);
  auto css_errors = [&](const std::vector<double>& theta, std::vector<double>& e) {
    const double mu = theta[0];
    for (std::size_t t = 0; t < n; ++t) {
      double predicted = mu;
      for (int j = 1; j <= q; ++j) {
        if (t >= static_cast<std::size_t>(j)) {
          predicted += theta[static_cast<std::size_t>(j)] * e[t - static_cast<std::size_t>(j)];
        }
      }
      e[t] = returns[t] - predicted;
    }
  };
  auto objective = [&](const std::vector<double>& theta) {
    css_errors(theta, errors);
    double ss = 0.0;
    for (double e : errors) ss += e * e;
    return std::isfinite(ss) ? ss : kInf;
  };

  double var = 0.0;
  for (double v : returns) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);

  std::vector<double> start(static_cast<std::size_t>(q + 1), 0.0);
  start[0] = mean;
  std::vector<double> steps(start.size(), 0.25);
  steps[0] = 0.25 * std::max(std::sqrt(var), 1e-8);

  const auto result = detail::nelder_mead(objective, start, steps, 1e-10,
                                          2000 * static_cast<std::int64_t>(start.size()));
  if (!result.converged || !std::isfinite(result.fx)) {
    fail("optimizer-failure", "MA(" + std::to_string(q) + ") estimation did not converge in " +
                                  std::to_string(result.iterations) + " iterations");
  }

  out.intercept = result.x[0];
  out.ma_coeffs.assign(result.x.begin() + 1, result.x.end());
  css_errors(result.x, errors);
  out.residuals = std::move(errors);
  return out;
}

std::vector<double> variance_path(std::span<const double> residuals, double omega,
                                  std::span<const double> alpha, std::span<const double> beta) {
  if (residuals.empty()) fail("empty-series", "no residuals");
  if (omega <= 0.0) fail("bad-config", "omega must be positive");
  const double var0 = mean_square(residuals);
  if (var0 <= 0.0) fail("degenerate-input", "residuals have zero variance");

  const std::size_t n = residuals.size();
  std::vector<double> h(n);
  h[0] = var0;
  for (std::size_t t = 1; t < n; ++t) {
    double v = omega;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const double eps2 = t >= j + 1 ? residuals[t - j - 1] * residuals[t - j - 1] : var0;
      v += alpha[j] * eps2;
    }
    for (std::size_t j = 0; j < beta.size(); ++j) {
      v += beta[j] * (t >= j + 1 ? h[t - j - 1] : var0);
    }
    h[t] = v;
  }
  return h;
}

double gaussian_loglik(std::span<const double> residuals, std::span<const double> h) {
  if (residuals.size() != h.size()) fail("bad-config", "residuals and h differ in length");
  double ll = 0.0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    if (!(h[t] > 0.0)) fail("bad-config", "conditional variance must be positive");
    ll += kLn2Pi + std::log(h[t]) + residuals[t] * residuals[t] / h[t];
  }
  return -0.5 * ll;
}

GarchFit fit_garch(std::span<const double> residuals, int p, int q) {
  validate_order(p, q);
  const std::size_t n = residuals.size();
  if (n < 100) {
    fail("series-too-short", "need at least 100 residuals, got " + std::to_string(n));
  }
  require_finite(residuals);
  const double var0 = mean_square(residuals);
  if (var0 <= 0.0) fail("degenerate-input", "residuals have zero variance");

  const ParamMap map{q, p};
  std::vector<double> start_weights;
  start_weights.reserve(static_cast<std::size_t>(q + p));
  for (int i = 0; i < q; ++i) start_weights.push_back(0.05 / q);
  for (int i = 0; i < p; ++i) start_weights.push_back(0.90 / p);
  const std::vector<double> start = map.encode(0.1 * var0, start_weights);

  double omega = 0.0;
  std::vector<double> alpha, beta;
  auto objective = [&](const std::vector<double>& theta) {
    map.decode(theta, omega, alpha, beta);
    double ll = 0.0;
    double h = var0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t > 0) {
        double v = omega;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
          const double eps2 = t >= j + 1 ? residuals[t - j - 1] * residuals[t - j - 1] : var0;
          v += alpha[j] * eps2;
        }
        // Higher-order h lags require the full path; the common p <= 1
        // case runs on this single accumulator.
        v += beta.empty() ? 0.0 : beta[0] * h;
        h = v;
      }
      ll += kLn2Pi + std::log(h) + residuals[t] * residuals[t] / h;
    }
    ll *= -0.5;
    return std::isfinite(ll) ? -ll : kInf;
  };

  // The fast accumulator above only covers p <= 1; general p falls back to
  // the full-path evaluation.
  auto objective_general = [&](const std::vector<double>& theta) {
    map.decode(theta, omega, alpha, beta);
    const std::vector<double> h = variance_path(residuals, omega, alpha, beta);
    const double ll = gaussian_loglik(residuals, h);
    return std::isfinite(ll) ? -ll : kInf;
  };

  const std::vector<double> steps(start.size(), 0.25);
  const std::int64_t max_iter = 2000 * static_cast<std::int64_t>(start.size());
  const detail::NelderMeadResult result =
      p <= 1 ? detail::nelder_mead(objective, start, steps, 1e-8, max_iter)
             : detail::nelder_mead(objective_general, start, steps, 1e-8, max_iter);
  if (!std::isfinite(result.fx)) {
    std::string iterate;
    for (double v : result.x) iterate += (iterate.empty() ? "" : ", ") + std::to_string(v);
    fail("optimizer-failure", "likelihood not finite at best iterate (" + iterate + ")");
  }

  GarchFit fit;
  map.decode(result.x, fit.omega, fit.alpha, fit.beta);
  fit.h_path = variance_path(residuals, fit.omega, fit.alpha, fit.beta);
  fit.loglik = gaussian_loglik(residuals, fit.h_path);
  fit.converged = result.converged;
  fit.iterations = result.iterations;
  fit.n_obs = static_cast<std::int64_t>(n);
  fit.resid_tail_sq.reserve(static_cast<std::size_t>(q));
  for (std::size_t t = n - static_cast<std::size_t>(q); t < n; ++t) {
    fit.resid_tail_sq.push_back(residuals[t] * residuals[t]);
  }
  return fit;
}

std::vector<double> forecast_sigma_path(const GarchFit& fit, int horizon) {
  if (horizon < 1) fail("bad-config", "horizon must be >= 1");
  if (!(fit.omega > 0.0) || fit.h_path.empty()) fail("bad-config", "fit is not initialized");

  const int q = static_cast<int>(fit.alpha.size());
  const int p = static_cast<int>(fit.beta.size());
  const std::size_t n = fit.h_path.size();
  // u[m] = E[h_{T+m}]; indices <= 0 refer to observed history.
  std::vector<double> u(static_cast<std::size_t>(horizon) + 1, 0.0);
  std::vector<double> sigma(static_cast<std::size_t>(horizon));
  for (int m = 1; m <= horizon; ++m) {
    double v = fit.omega;
    for (int j = 1; j <= q; ++j) {
      const int s = m - j;
      const double eps2 = s >= 1 ? u[static_cast<std::size_t>(s)]
                                 : fit.resid_tail_sq[static_cast<std::size_t>(q - 1 + s)];
      v += fit.alpha[static_cast<std::size_t>(j - 1)] * eps2;
    }
    for (int j = 1; j <= p; ++j) {
      const int s = m - j;
      const double hv = s >= 1 ? u[static_cast<std::size_t>(s)]
                               : fit.h_path[n - 1 + static_cast<std::size_t>(s)];
      v += fit.beta[static_cast<std::size_t>(j - 1)] * hv;
    }
    u[static_cast<std::size_t>(m)] = v;
    sigma[static_cast<std::size_t>(m - 1)] = std::sqrt(v);
  }
  return sigma;
}

evaluate::ClassLabel garch_forecast_sign(double sigma_hat_next, double sigma_prev) {
  if (!std::isfinite(sigma_hat_next) || !std::isfinite(sigma_prev) || sigma_hat_next < 0.0 ||
      sigma_prev < 0.0) {
    fail("bad-config", "sigmas must be finite and non-negative");
  }
  return sigma_hat_next > sigma_prev ? evaluate::ClassLabel::increase
                                     : evaluate::ClassLabel::decrease;
}

std::vector<double> acf(std::span<const double> series, int n_lags) {
  const std::size_t n = series.size();
  if (n_lags < 0) fail("bad-config", "lag count must be >= 0");
  if (static_cast<std::size_t>(n_lags) >= n) {
    fail("bad-config", "lag count must be below the series length");
  }
  require_finite(series);

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  if (c0 <= 0.0) fail("zero-variance", "constant series has no autocorrelation");

  std::vector<double> out(static_cast<std::size_t>(n_lags) + 1);
  out[0] = 1.0;
  for (int k = 1; k <= n_lags; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
      ck += (series[t] - mean) * (series[t + static_cast<std::size_t>(k)] - mean);
    }
    out[static_cast<std::size_t>(k)] = ck / c0;
  }
  return out;
}

std::vector<double> pacf(std::span<const double> series, int n_lags) {
  const std::vector<double> rho = acf(series, n_lags);
  std::vector<double> out(rho.size(), 0.0);
  out[0] = 1.0;
  if (n_lags < 1) return out;

  std::vector<double> phi(rho.size(), 0.0), phi_next(rho.size(), 0.0);
  phi[1] = rho[1];
  out[1] = rho[1];
  double v = 1.0 - rho[1] * rho[1];
  for (int k = 2; k <= n_lags; ++k) {
    // v is the relative prediction-error variance; once it hits zero the
    // series is perfectly predictable and higher partials stay zero.
    if (v <= 1e-14) break;
    double num = rho[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j) {
      num -= phi[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(k - j)];
    }
    const double a = num / v;
    out[static_cast<std::size_t>(k)] = a;
    for (int j = 1; j < k; ++j) {
      phi_next[static_cast<std::size_t>(j)] = phi[static_cast<std::size_t>(j)] -
                                              a * phi[static_cast<std::size_t>(k - j)];
    }
    phi_next[static_cast<std::size_t>(k)] = a;
    std::copy(phi_next.begin(), phi_next.begin() + k + 1, phi.begin());
    v *= 1.0 - a * a;
  }
  return out;
}

InfoCriteria information_criteria(double loglik, int n_params, double n_obs) {
  if (!(n_obs >= 1.0)) fail("bad-config", "n_obs must be >= 1");
  if (n_params < 0) fail("bad-config", "n_params must be >= 0");
  InfoCriteria out;
  out.aic = 2.0 * n_params - 2.0 * loglik;
  out.bic = n_params * std::log(n_obs) - 2.0 * loglik;
  return out;
}

std::size_t best_by_aic(std::span<const GarchFit> fits) {
  if (fits.empty()) fail("bad-config", "no candidate fits");
  std::size_t best = 0;
  InfoCriteria best_ic = information_criteria(fits[0].loglik, fits[0].n_params(),
                                              static_cast<double>(fits[0].n_obs));
  for (std::size_t i = 1; i < fits.size(); ++i) {
    const InfoCriteria ic = information_criteria(fits[i].loglik, fits[i].n_params(),
                                                 static_cast<double>(fits[i].n_obs));
    if (ic.aic < best_ic.aic || (ic.aic == best_ic.aic && ic.bic < best_ic.bic)) {
      best = i;
      best_ic = ic;
    }
  }
  return best;
}

}  // namespace volkit::garch
