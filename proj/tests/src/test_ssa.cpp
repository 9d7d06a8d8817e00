#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "volkit/labels.hpp"
#include "volkit/ssa.hpp"
#include "volkit/synth.hpp"

namespace ssa = volkit::ssa;
using testutil::err_id;
using volkit::evaluate::ClassLabel;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed, double level = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = level + n01(rng);
  return out;
}

double frobenius_sq(std::span<const double> series, int L) {
  // Each sample s_t appears in min(L, K, t+1, N-t) lagged windows.
  const int N = static_cast<int>(series.size());
  const int K = N - L + 1;
  double total = 0.0;
  for (int t = 0; t < N; ++t) {
    const int lo = std::max(0, t - K + 1);
    const int hi = std::min(t, L - 1);
    total += static_cast<double>(hi - lo + 1) * series[static_cast<std::size_t>(t)] *
             series[static_cast<std::size_t>(t)];
  }
  return total;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(va * vb);
}

}  // namespace

TEST_CASE("constant series has a rank-one spectrum") {
  const std::vector<double> series(30, 2.5);
  const auto d = ssa::decompose(series, 3);
  CHECK(d.rank() == 1);
  CHECK(d.eigenvalues(0) > 0.0);

  const auto recon = ssa::reconstruct(d, {0});
  REQUIRE(recon.size() == series.size());
  for (double v : recon) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("pure sinusoid has exactly two significant components") {
  std::vector<double> series(200);
  for (std::size_t t = 0; t < series.size(); ++t) {
    series[t] = std::sin(2.0 * M_PI * static_cast<double>(t) / 11.4 + 0.3);
  }
  const auto d = ssa::decompose(series, 8);
  CHECK(d.rank(1e-9) == 2);

  // Independent SVD of the explicit trajectory matrix: squared singular
  // values must match the reported eigenvalues.
  const auto sv = oracle::trajectory_singular_values(series, 8);
  REQUIRE(static_cast<int>(sv.size()) == d.eigenvalues.size());
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    const double expected = sv[static_cast<std::size_t>(i)] * sv[static_cast<std::size_t>(i)];
    if (expected > 1e-9 * d.eigenvalues(0)) {
      CHECK(d.eigenvalues(i) == doctest::Approx(expected).epsilon(1e-9));
    } else {
      CHECK(d.eigenvalues(i) <= 1e-9 * d.eigenvalues(0));
    }
  }
}

TEST_CASE("eigen spectrum matches the svd oracle on random input") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto series = random_series(64 + 13 * seed, 1000 + seed, 0.4);
    const int L = 4 + static_cast<int>(3 * seed);
    const auto d = ssa::decompose(series, L);
    const auto sv = oracle::trajectory_singular_values(series, L);
    for (int i = 0; i < d.eigenvalues.size(); ++i) {
      const double expected = sv[static_cast<std::size_t>(i)] * sv[static_cast<std::size_t>(i)];
      CHECK(d.eigenvalues(i) ==
            doctest::Approx(expected).epsilon(1e-8).scale(d.eigenvalues(0)));
    }
  }
}

TEST_CASE("spectrum sums to the trajectory matrix energy") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto series = random_series(48 + 31 * seed, 2000 + seed);
    const int L = 3 + static_cast<int>(7 * seed);
    const auto d = ssa::decompose(series, L);
    const double energy = frobenius_sq(series, L);
    CHECK(d.eigenvalues.sum() == doctest::Approx(energy).epsilon(1e-9));
  }
}

TEST_CASE("eigenvalues are clamped, ordered, and vectors orthonormal") {
  const auto series = random_series(120, 5);
  const auto d = ssa::decompose(series, 12);
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    CHECK(d.eigenvalues(i) >= 0.0);
    if (i > 0) CHECK(d.eigenvalues(i) <= d.eigenvalues(i - 1));
  }
  const Eigen::MatrixXd gram = d.eigenvectors.transpose() * d.eigenvectors;
  for (int i = 0; i < gram.rows(); ++i)
    for (int j = 0; j < gram.cols(); ++j)
      CHECK(gram(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1).epsilon(1e-9));

  // Sign convention: every eigenvector's largest-magnitude entry is positive.
  for (int c = 0; c < d.eigenvectors.cols(); ++c) {
    int arg = 0;
    d.eigenvectors.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(d.eigenvectors(arg, c) > 0.0);
  }
}

TEST_CASE("full reconstruction is the identity") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto series = random_series(50 + 40 * seed, 3000 + seed, -1.2);
    const int L = 2 + static_cast<int>(11 * seed);
    const auto d = ssa::decompose(series, L);
    std::vector<int> all(static_cast<std::size_t>(L));
    std::iota(all.begin(), all.end(), 0);
    const auto recon = ssa::reconstruct(d, all);
    REQUIRE(recon.size() == series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
      CHECK(recon[t] == doctest::Approx(series[t]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("component reconstruction matches the svd oracle") {
  const auto series = random_series(90, 77, 3.0);
  const auto d = ssa::decompose(series, 10);
  for (int comp : {0, 1, 2}) {
    const auto mine = ssa::reconstruct(d, {comp});
    const auto ref = oracle::svd_component_series(series, 10, comp);
    for (std::size_t t = 0; t < series.size(); ++t) {
      CHECK(mine[t] == doctest::Approx(ref[t]).epsilon(1e-8).scale(1.0));
    }
  }
  // Duplicate selections count once.
  const auto once = ssa::reconstruct(d, {0});
  const auto twice = ssa::reconstruct(d, {0, 0});
  CHECK(once == twice);
}

TEST_CASE("reconstruction input validation") {
  const auto series = random_series(40, 4);
  const auto d = ssa::decompose(series, 5);
  CHECK(err_id([&] { ssa::reconstruct(d, {5}); }) == "component-out-of-range");
  CHECK(err_id([&] { ssa::reconstruct(d, {-1}); }) == "component-out-of-range");
  CHECK(err_id([&] { ssa::decompose(series, 1); }) == "bad-config");
  CHECK(err_id([&] { ssa::decompose(series, 40); }) == "series-too-short");
  std::vector<double> bad = series;
  bad[7] = std::nan("");
  CHECK(err_id([&] { ssa::decompose(bad, 5); }) == "non-finite-input");
}

TEST_CASE("short window tracks a wiggly series more closely") {
  // Noisy multi-scale series: one slow component one fast, plus noise.
  std::mt19937_64 rng(321);
  std::normal_distribution<double> n01(0.0, 0.3);
  std::vector<double> series(300);
  double level = 10.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    level += 0.02 * n01(rng);
    series[t] = level + std::sin(static_cast<double>(t) / 9.0) +
                0.4 * std::sin(static_cast<double>(t) / 2.3) + n01(rng);
  }
  const auto recon10 = ssa::reconstruct(ssa::decompose(series, 10), {0});
  const auto recon80 = ssa::reconstruct(ssa::decompose(series, 80), {0});
  CHECK(rmse(recon10, series) < rmse(recon80, series));
}

TEST_CASE("scaling the series scales the spectrum quadratically") {
  const auto series = random_series(70, 909);
  const auto base = ssa::decompose(series, 9);
  for (const double c : {0.5, 3.0, 250.0}) {
    auto scaled = series;
    for (auto& v : scaled) v *= c;
    const auto d = ssa::decompose(scaled, 9);
    for (int i = 0; i < base.eigenvalues.size(); ++i) {
      CHECK(d.eigenvalues(i) ==
            doctest::Approx(c * c * base.eigenvalues(i)).epsilon(1e-9).scale(base.eigenvalues(0)));
    }
    for (int col = 0; col < base.eigenvectors.cols(); ++col) {
      for (int row = 0; row < base.eigenvectors.rows(); ++row) {
        CHECK(d.eigenvectors(row, col) ==
              doctest::Approx(base.eigenvectors(row, col)).scale(1).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("trend components of a noisy sine stay close to the clean signal") {
  const auto noisy = volkit::synth::gen_harmonic({{1.0, 60.0, 0.0}}, 0.3, 500, 12);
  const auto clean = volkit::synth::gen_harmonic({{1.0, 60.0, 0.0}}, 0.0, 500, 12);
  const auto recon = ssa::reconstruct(ssa::decompose(noisy, 40), {0, 1});
  CHECK(correlation(recon, clean) > 0.95);
}

TEST_CASE("direction rule: rising trend means class I") {
  ssa::SsaConfig cfg;
  cfg.window_length = 3;
  cfg.series_window = 30;
  cfg.component_index = 0;

  std::vector<double> ramp(30);
  for (std::size_t t = 0; t < 30; ++t) ramp[t] = 1.0 + 0.1 * static_cast<double>(t);
  CHECK(ssa::ssa_forecast_sign(ramp, cfg) == ClassLabel::increase);

  // The trend-vs-window comparison recomputed through the SVD oracle agrees.
  const auto trend = oracle::svd_component_series(ramp, 3, 0);
  const double trend_mean =
      std::accumulate(trend.begin(), trend.end(), 0.0) / static_cast<double>(trend.size());
  const double window_mean =
      std::accumulate(ramp.begin(), ramp.end(), 0.0) / static_cast<double>(ramp.size());
  CHECK(trend_mean > window_mean);

  // On any window the label equals the oracle-computed mean comparison;
  // a falling ramp exercises the branch without pinning its label.
  std::vector<double> falling(30);
  for (std::size_t t = 0; t < 30; ++t) falling[t] = 10.0 - 0.2 * static_cast<double>(t);
  const auto fall_trend = oracle::svd_component_series(falling, 3, 0);
  const double fall_trend_mean =
      std::accumulate(fall_trend.begin(), fall_trend.end(), 0.0) /
      static_cast<double>(fall_trend.size());
  const double fall_window_mean =
      std::accumulate(falling.begin(), falling.end(), 0.0) / static_cast<double>(falling.size());
  const auto expected =
      fall_trend_mean > fall_window_mean ? ClassLabel::increase : ClassLabel::decrease;
  CHECK(ssa::ssa_forecast_sign(falling, cfg) == expected);
}

TEST_CASE("direction rule: constant window ties to class II") {
  ssa::SsaConfig cfg;
  cfg.window_length = 4;
  cfg.series_window = 20;
  const std::vector<double> flat(20, 3.3);
  CHECK(ssa::ssa_forecast_sign(flat, cfg) == ClassLabel::decrease);
}

TEST_CASE("direction rule is invariant under positive scaling") {
  ssa::SsaConfig cfg;
  cfg.window_length = 6;
  cfg.series_window = 40;
  cfg.component_index = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto window = random_series(40, 5000 + seed, 5.0);
    const auto base = ssa::ssa_forecast_sign(window, cfg);
    for (const double c : {0.01, 7.0, 4096.0}) {
      auto scaled = window;
      for (auto& v : scaled) v *= c;
      CHECK(ssa::ssa_forecast_sign(scaled, cfg) == base);
    }
  }
}

TEST_CASE("config validation rejects inconsistent shapes") {
  ssa::SsaConfig cfg;
  cfg.window_length = 1;
  cfg.series_window = 30;
  CHECK(err_id([&] { cfg.validate(); }) == "bad-config");
  cfg.window_length = 30;
  CHECK(err_id([&] { cfg.validate(); }) == "bad-config");
  cfg.window_length = 5;
  cfg.component_index = 5;
  CHECK(err_id([&] { cfg.validate(); }) == "bad-config");
  cfg.component_index = -1;
  CHECK(err_id([&] { cfg.validate(); }) == "bad-config");
  cfg.component_index = 4;
  CHECK(err_id([&] { cfg.validate(); }) == "");

  const std::vector<double> window(29, 1.0);
  ssa::SsaConfig ok;
  ok.window_length = 3;
  ok.series_window = 30;
  CHECK(err_id([&] { ssa::ssa_forecast_sign(window, ok); }) == "bad-config");
}
