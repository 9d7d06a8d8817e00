#pragma once

#include "volkit/dynsys.hpp"
#include "volkit/evaluate.hpp"
#include "volkit/ssa.hpp"

namespace volkit::evaluate {

/// Trend-versus-window-mean rule applied to each window. The config's
/// series window must equal the backtest window.
class SsaForecaster final : public Forecaster {
 public:
  explicit SsaForecaster(ssa::SsaConfig config) : config_(config) { config_.validate(); }
  std::string id() const override { return "ssa"; }
  ClassLabel predict(std::span<const double> window) const override {
    return ssa::ssa_forecast_sign(window, config_);
  }

 private:
  ssa::SsaConfig config_;
};

/// Sign of the largest Lyapunov exponent of the window: instability reads
/// as rising volatility. With auto_lag the embedding delay is re-derived
/// from each window's autocorrelation.
class LyapunovForecaster final : public Forecaster {
 public:
  explicit LyapunovForecaster(dynsys::EmbedConfig config, bool auto_lag = false)
      : config_(config), auto_lag_(auto_lag) {
    if (!auto_lag_) config_.validate();
  }
  std::string id() const override { return "lyapunov"; }
  ClassLabel predict(std::span<const double> window) const override {
    dynsys::EmbedConfig config = config_;
    if (auto_lag_) config.lag = dynsys::autocorr_lag(window);
    return dynsys::lyapunov_forecast_sign(dynsys::estimate_lambda1(window, config));
  }

 private:
  dynsys::EmbedConfig config_;
  bool auto_lag_;
};

/// Volatility series treated as the series to model: demean (optionally
/// MA(mean_q)), fit GARCH(p,q) to the residuals, forecast the conditional
/// sigma `horizon` steps out, and compare it against the window's last
/// value. The horizon must match the backtest horizon.
class GarchForecaster final : public Forecaster {
 public:
  GarchForecaster(int p = 1, int q = 1, int mean_q = 0, int horizon = 1)
      : p_(p), q_(q), mean_q_(mean_q), horizon_(horizon) {}
  std::string id() const override { return "garch"; }
  ClassLabel predict(std::span<const double> window) const override;

 private:
  int p_;
  int q_;
  int mean_q_;
  int horizon_;
};

}  // namespace volkit::evaluate
