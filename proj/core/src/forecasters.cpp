#include "volkit/forecasters.hpp"

#include "volkit/errors.hpp"
#include "volkit/garch.hpp"

namespace volkit::evaluate {

ClassLabel GarchForecaster::predict(std::span<const double> window) const {
  if (window.empty()) fail("empty-series", "empty window");
  const garch::MeanModel mean = garch::fit_mean_model(window, mean_q_);
  const garch::GarchFit fit = garch::fit_garch(mean.residuals, p_, q_);
  const std::vector<double> path = garch::forecast_sigma_path(fit, horizon_);
  return garch::garch_forecast_sign(path[static_cast<std::size_t>(horizon_ - 1)],
                                    window.back());
}

}  // namespace volkit::evaluate
