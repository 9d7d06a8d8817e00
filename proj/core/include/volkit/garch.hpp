#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "volkit/labels.hpp"

namespace volkit::garch {

/// Mean structure removed before variance modeling: an intercept plus an
/// optional MA(q) term. With q=0 the residuals are simply input - mu.
struct MeanModel {
  double intercept = 0.0;
  std::vector<double> ma_coeffs;
  std::vector<double> residuals;
};

/// q=0 demeans; q>=1 fits intercept and MA coefficients by minimizing the
/// conditional sum of squares with pre-sample errors set to zero.
/// Requires length >= 10*(q+1). Throws on minimizer non-convergence.
MeanModel fit_mean_model(std::span<const double> returns, int q = 0);

/// Fitted conditional-variance recursion
///   h_t = omega + sum_j alpha[j] eps^2_{t-1-j} + sum_j beta[j] h_{t-1-j}.
/// Constraints hold by construction: omega > 0, coefficients >= 0,
/// persistence < 1, h_path > 0.
struct GarchFit {
  double omega = 0.0;
  std::vector<double> alpha;  // loadings on lagged squared residuals, lag 1 first
  std::vector<double> beta;   // loadings on lagged conditional variances
  double loglik = 0.0;
  std::vector<double> h_path;
  bool converged = false;
  std::int64_t iterations = 0;
  std::int64_t n_obs = 0;
  std::vector<double> resid_tail_sq;  // last q squared residuals, oldest first

  double persistence() const;
  double unconditional_variance() const;
  int n_params() const { return 1 + static_cast<int>(alpha.size() + beta.size()); }
};

/// Conditional variances for given parameters. h[0] and every pre-sample
/// eps^2 or h term equal the mean of the squared residuals.
std::vector<double> variance_path(std::span<const double> residuals, double omega,
                                  std::span<const double> alpha, std::span<const double> beta);

/// -1/2 sum(ln 2pi + ln h_t + eps_t^2 / h_t). Requires h > 0 throughout.
double gaussian_loglik(std::span<const double> residuals, std::span<const double> h);

/// Gaussian maximum likelihood via simplex descent over transformed
/// parameters (log omega; a logit map keeping the coefficients positive
/// with sum < 1). Start point omega = 0.1*variance, total alpha mass 0.05,
/// total beta mass 0.90, tolerance 1e-8 on the log-likelihood; fixed, so
/// fits are deterministic. Requires length >= 100 and nonzero variance.
GarchFit fit_garch(std::span<const double> residuals, int p = 1, int q = 1);

/// Square roots of expected variances h_{T+1..T+horizon}. Step 1 uses the
/// observed terminal state; later steps replace unseen eps^2 terms with
/// their expectation, the prior forecast.
std::vector<double> forecast_sigma_path(const GarchFit& fit, int horizon);

/// sigma_hat > sigma_prev -> increase (class I); otherwise decrease.
evaluate::ClassLabel garch_forecast_sign(double sigma_hat_next, double sigma_prev);

/// Sample autocorrelation (biased c_k/c_0 estimator), acf[0] = 1.
/// Requires n_lags < length and nonzero variance.
std::vector<double> acf(std::span<const double> series, int n_lags);

/// Partial autocorrelation via the Durbin-Levinson recursion, pacf[0] = 1.
std::vector<double> pacf(std::span<const double> series, int n_lags);

struct InfoCriteria {
  double aic = 0.0;
  double bic = 0.0;
};

/// aic = 2k - 2 loglik; bic = k ln(n_obs) - 2 loglik. n_obs may be any
/// real right operand of the logarithm, >= 1.
InfoCriteria information_criteria(double loglik, int n_params, double n_obs);

/// Index of the minimum-AIC fit; ties broken by lower BIC, then by the
/// earlier candidate.
std::size_t best_by_aic(std::span<const GarchFit> fits);

}  // namespace volkit::garch
