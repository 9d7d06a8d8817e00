#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "volkit/garch.hpp"
#include "volkit/labels.hpp"
#include "volkit/synth.hpp"

namespace g = volkit::garch;
using testutil::err_id;
using volkit::evaluate::ClassLabel;

namespace {

std::vector<double> simulate_ma(double mu, const std::vector<double>& theta, std::size_t n,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> shocks(n + theta.size());
  for (auto& e : shocks) e = n01(rng);
  std::vector<double> out(n);
  const std::size_t q = theta.size();
  for (std::size_t t = 0; t < n; ++t) {
    double v = mu + shocks[t + q];
    for (std::size_t j = 0; j < q; ++j) v += theta[j] * shocks[t + q - 1 - j];
    out[t] = v;
  }
  return out;
}

std::vector<double> simulated_garch_returns(double omega, double alpha, double beta,
                                            std::int64_t n, std::uint64_t seed) {
  volkit::synth::GarchSimParams p;
  p.omega = omega;
  p.alpha = alpha;
  p.beta = beta;
  p.n = n;
  p.seed = seed;
  return volkit::synth::gen_garch(p).returns;
}

}  // namespace

TEST_CASE("demeaning removes the intercept and nothing else") {
  const auto x = simulate_ma(0.7, {}, 20000, 11);
  const auto mean = g::fit_mean_model(x, 0);
  CHECK(mean.ma_coeffs.empty());
  CHECK(std::abs(mean.intercept - 0.7) < 3.0 / std::sqrt(20000.0));
  REQUIRE(mean.residuals.size() == x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    CHECK(mean.residuals[t] == doctest::Approx(x[t] - mean.intercept).epsilon(1e-12));
  }
}

TEST_CASE("moving-average coefficients are recovered from a long sample") {
  const std::vector<double> theta = {0.45, -0.30, 0.20, 0.10};
  const auto x = simulate_ma(0.2, theta, 20000, 23);
  const auto mean = g::fit_mean_model(x, 4);
  REQUIRE(mean.ma_coeffs.size() == 4);
  CHECK(std::abs(mean.intercept - 0.2) < 0.05);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(mean.ma_coeffs[j] - theta[j]) < 0.05);
  }
  // Residuals should look like the driving white noise.
  double s2 = 0.0;
  for (double e : mean.residuals) s2 += e * e;
  s2 /= static_cast<double>(mean.residuals.size());
  CHECK(s2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("mean model input validation") {
  const auto x = simulate_ma(0.0, {}, 25, 3);
  CHECK(err_id([&] { g::fit_mean_model(x, -1); }) == "bad-config");
  CHECK(err_id([&] { g::fit_mean_model(x, 2); }) == "series-too-short");
}

TEST_CASE("variance parameters are recovered from simulated returns") {
  const auto r = simulated_garch_returns(0.05, 0.10, 0.85, 20000, 42);
  const auto fit = g::fit_garch(r, 1, 1);
  REQUIRE(fit.alpha.size() == 1);
  REQUIRE(fit.beta.size() == 1);
  CHECK(fit.converged);
  CHECK(std::abs(fit.omega - 0.05) < 0.05);
  CHECK(std::abs(fit.alpha[0] - 0.10) < 0.05);
  CHECK(std::abs(fit.beta[0] - 0.85) < 0.05);
  CHECK(fit.persistence() == doctest::Approx(fit.alpha[0] + fit.beta[0]).epsilon(1e-12));
  CHECK(fit.persistence() < 1.0);
  CHECK(fit.n_obs == 20000);

  // The fitted optimum cannot be worse than the generating parameters.
  const auto h_true = g::variance_path(r, 0.05, std::vector<double>{0.10},
                                       std::vector<double>{0.85});
  CHECK(fit.loglik >= g::gaussian_loglik(r, h_true) - 1e-6);

  // Stored variance path is reproducible from the stored parameters.
  const auto h_again = g::variance_path(r, fit.omega, fit.alpha, fit.beta);
  REQUIRE(h_again.size() == fit.h_path.size());
  for (std::size_t t = 0; t < h_again.size(); ++t) {
    CHECK(fit.h_path[t] == doctest::Approx(h_again[t]).epsilon(1e-10));
  }
  CHECK(fit.unconditional_variance() ==
        doctest::Approx(fit.omega / (1.0 - fit.persistence())).epsilon(1e-12));
}

TEST_CASE("fit rejects degenerate or short inputs") {
  const std::vector<double> zeros(500, 0.0);
  CHECK(err_id([&] { g::fit_garch(zeros, 1, 1); }) == "degenerate-input");
  const auto r = simulated_garch_returns(0.1, 0.05, 0.9, 99, 1);
  CHECK(err_id([&] { g::fit_garch(r, 1, 1); }) == "series-too-short");
  const auto ok = simulated_garch_returns(0.1, 0.05, 0.9, 200, 1);
  CHECK(err_id([&] { g::fit_garch(ok, 0, 0); }) == "bad-config");
}

TEST_CASE("fit is equivariant under rescaling of the inputs") {
  const auto r = simulated_garch_returns(0.05, 0.08, 0.88, 4000, 7);
  const auto base = g::fit_garch(r, 1, 1);
  const double c = 2.0;  // exact in floating point
  auto scaled_input = r;
  for (auto& v : scaled_input) v *= c;
  const auto scaled = g::fit_garch(scaled_input, 1, 1);
  CHECK(scaled.omega == doctest::Approx(c * c * base.omega).epsilon(1e-4));
  CHECK(scaled.alpha[0] == doctest::Approx(base.alpha[0]).epsilon(1e-4));
  CHECK(scaled.beta[0] == doctest::Approx(base.beta[0]).epsilon(1e-4));

  const auto s_base = g::forecast_sigma_path(base, 5);
  const auto s_scaled = g::forecast_sigma_path(scaled, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(s_scaled[k] == doctest::Approx(c * s_base[k]).epsilon(1e-3));
  }
}

TEST_CASE("variance path validation and pre-sample convention") {
  const std::vector<double> e = {1.0, -2.0, 0.5, 0.0, 1.5};
  const std::vector<double> a = {0.1};
  const std::vector<double> b = {0.8};
  const auto h = g::variance_path(e, 0.2, a, b);
  REQUIRE(h.size() == e.size());
  // h[0] equals the mean squared residual; later terms follow the recursion.
  double ms = 0.0;
  for (double v : e) ms += v * v;
  ms /= static_cast<double>(e.size());
  CHECK(h[0] == doctest::Approx(ms).epsilon(1e-12));
  for (std::size_t t = 1; t < e.size(); ++t) {
    CHECK(h[t] == doctest::Approx(0.2 + 0.1 * e[t - 1] * e[t - 1] + 0.8 * h[t - 1])
                      .epsilon(1e-12));
  }
  CHECK(err_id([&] { g::variance_path(e, 0.0, a, b); }) == "bad-config");
  CHECK(err_id([&] { g::variance_path({}, 0.2, a, b); }) == "empty-series");
}

TEST_CASE("constant-variance model forecasts a flat sigma") {
  g::GarchFit flat;
  flat.omega = 0.04;
  flat.alpha = {0.0};
  flat.beta = {0.0};
  flat.h_path = {0.04, 0.04};
  flat.resid_tail_sq = {0.09};
  const auto sigma = g::forecast_sigma_path(flat, 6);
  REQUIRE(sigma.size() == 6);
  for (double s : sigma) CHECK(s == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("forecast relaxes monotonically toward the unconditional level") {
  const auto r = simulated_garch_returns(0.05, 0.10, 0.85, 6000, 9);
  const auto fit = g::fit_garch(r, 1, 1);
  const int horizon = 1144;
  const auto sigma = g::forecast_sigma_path(fit, horizon);
  REQUIRE(sigma.size() == static_cast<std::size_t>(horizon));
  const double target = std::sqrt(fit.unconditional_variance());
  double prev_gap = std::abs(sigma[0] - target);
  for (std::size_t k = 1; k < sigma.size(); ++k) {
    const double gap = std::abs(sigma[k] - target);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(std::abs(sigma.back() - target) < 1e-8);
  CHECK(err_id([&] { g::forecast_sigma_path(fit, 0); }) == "bad-config");
}

TEST_CASE("direction rule compares forecast against the last level") {
  CHECK(g::garch_forecast_sign(0.02, 0.01) == ClassLabel::increase);
  CHECK(g::garch_forecast_sign(0.01, 0.02) == ClassLabel::decrease);
  CHECK(g::garch_forecast_sign(0.015, 0.015) == ClassLabel::decrease);
  CHECK(err_id([&] { g::garch_forecast_sign(-0.1, 0.1); }) == "bad-config");
}

TEST_CASE("autocorrelation matches closed forms") {
  // MA(1): rho_1 = theta / (1 + theta^2), rho_k = 0 beyond.
  const double theta = 0.6;
  const auto x = simulate_ma(0.0, {theta}, 40000, 31);
  const auto r = g::acf(x, 6);
  REQUIRE(r.size() == 7);
  CHECK(r[0] == 1.0);
  CHECK(std::abs(r[1] - theta / (1.0 + theta * theta)) < 0.02);
  for (std::size_t k = 2; k < r.size(); ++k) CHECK(std::abs(r[k]) < 0.02);

  // Affine maps leave the autocorrelation untouched.
  auto y = x;
  for (auto& v : y) v = -3.0 * v + 40.0;
  const auto ry = g::acf(y, 6);
  for (std::size_t k = 0; k < r.size(); ++k) {
    CHECK(ry[k] == doctest::Approx(r[k]).scale(1).epsilon(1e-9));
  }
}

TEST_CASE("white-noise autocorrelations stay inside the sampling band") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> wn(10000);
  for (auto& v : wn) v = n01(rng);
  const auto r = g::acf(wn, 40);
  const double band = 2.0 / std::sqrt(10000.0);
  int inside = 0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (std::abs(r[k]) <= band) ++inside;
  }
  CHECK(inside >= 36);  // 95% band, 40 lags

  CHECK(err_id([&] { g::acf(wn, 10000); }) == "bad-config");
  const std::vector<double> flat(50, 3.0);
  CHECK(err_id([&] { g::acf(flat, 5); }) == "zero-variance");
}

TEST_CASE("partial autocorrelation separates AR and MA signatures") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> ar(40000);
  double prev = 0.0;
  for (auto& v : ar) {
    prev = 0.6 * prev + n01(rng);
    v = prev;
  }
  const auto p = g::pacf(ar, 6);
  REQUIRE(p.size() == 7);
  CHECK(p[0] == 1.0);
  CHECK(std::abs(p[1] - 0.6) < 0.02);
  for (std::size_t k = 2; k < p.size(); ++k) CHECK(std::abs(p[k]) < 0.02);

  // MA(1) has geometric pacf decay, not a cutoff.
  const auto x = simulate_ma(0.0, {0.6}, 40000, 37);
  const auto pm = g::pacf(x, 3);
  CHECK(std::abs(pm[1]) > 0.3);
  CHECK(std::abs(pm[2]) > 0.05);
  CHECK(pm[1] * pm[2] < 0.0);  // alternating signs for positive theta
}

TEST_CASE("information criteria penalize size and reward likelihood") {
  const double e2 = std::exp(2.0);
  const auto ic = g::information_criteria(0.0, 2, e2);
  CHECK(ic.aic == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(ic.bic == doctest::Approx(4.0).epsilon(1e-12));

  const auto better = g::information_criteria(-10.0, 3, 500.0);
  const auto worse = g::information_criteria(-20.0, 3, 500.0);
  CHECK(better.aic < worse.aic);
  CHECK(better.bic < worse.bic);
  const auto bigger = g::information_criteria(-10.0, 4, 500.0);
  CHECK(bigger.aic > better.aic);
  CHECK(bigger.bic > better.bic);
  CHECK(err_id([&] { g::information_criteria(0.0, 2, 0.5); }) == "bad-config");
}

TEST_CASE("model selection minimizes AIC with BIC tie-break") {
  const auto r = simulated_garch_returns(0.05, 0.10, 0.85, 2000, 5);
  auto a = g::fit_garch(r, 1, 1);
  auto b = a;
  auto c = a;
  // Force a decisive AIC gap.
  a.loglik = -100.0;
  b.loglik = -90.0;
  c.loglik = -95.0;
  std::vector<g::GarchFit> fits = {a, b, c};
  CHECK(g::best_by_aic(fits) == 1);

  // Equal AIC, lower BIC wins: same loglik, same n_params, smaller n_obs.
  auto d = b;
  d.n_obs = 100;
  b.n_obs = 2000;
  std::vector<g::GarchFit> tie = {b, d};
  CHECK(g::best_by_aic(tie) == 1);

  // Full tie keeps the earlier candidate.
  std::vector<g::GarchFit> same = {b, b};
  CHECK(g::best_by_aic(same) == 0);
  CHECK(err_id([&] { g::best_by_aic({}); }) == "bad-config");
}
