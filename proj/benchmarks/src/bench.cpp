#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "volkit/dynsys.hpp"
#include "volkit/garch.hpp"
#include "volkit/marketdata.hpp"
#include "volkit/rng.hpp"
#include "volkit/ssa.hpp"
#include "volkit/synth.hpp"

namespace {

std::vector<double> noisy_series(std::size_t n, std::uint64_t seed) {
  volkit::GaussianRng rng(seed);
  std::vector<double> out(n);
  double level = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    level += 0.05 * rng.gaussian();
    out[i] = level + rng.gaussian();
  }
  return out;
}

void bm_ssa_decompose(benchmark::State& state) {
  const auto series = noisy_series(523, 11);
  const int window = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto d = volkit::ssa::decompose(series, window);
    benchmark::DoNotOptimize(d.eigenvalues);
  }
}
BENCHMARK(bm_ssa_decompose)->Arg(8)->Arg(32)->Arg(128);

void bm_ssa_reconstruct(benchmark::State& state) {
  const auto series = noisy_series(523, 11);
  const auto d = volkit::ssa::decompose(series, 32);
  const std::vector<int> components{0, 1};
  for (auto _ : state) {
    auto r = volkit::ssa::reconstruct(d, components);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(bm_ssa_reconstruct);

void bm_lyapunov_estimate(benchmark::State& state) {
  volkit::synth::LorenzParams lp;
  lp.n = state.range(0);
  const auto traj = volkit::synth::gen_lorenz(lp);
  volkit::dynsys::EmbedConfig cfg;
  cfg.dim = 3;
  cfg.lag = 11;
  for (auto _ : state) {
    auto est = volkit::dynsys::estimate_lambda1(traj.x, cfg);
    benchmark::DoNotOptimize(est.lambda1);
  }
}
BENCHMARK(bm_lyapunov_estimate)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

void bm_garch_fit(benchmark::State& state) {
  volkit::synth::GarchSimParams p;
  p.omega = 0.05;
  p.alpha = 0.10;
  p.beta = 0.85;
  p.n = state.range(0);
  p.seed = 7;
  const auto returns = volkit::synth::gen_garch(p);
  for (auto _ : state) {
    auto fit = volkit::garch::fit_garch(returns.returns, 1, 1);
    benchmark::DoNotOptimize(fit.loglik);
  }
}
BENCHMARK(bm_garch_fit)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void bm_realized_volatility(benchmark::State& state) {
  volkit::GaussianRng rng(23);
  const std::size_t n = 100000;
  volkit::marketdata::PriceSeries prices;
  prices.pair_id = "SYN";
  prices.timestamps.resize(n);
  prices.prices.resize(n);
  double logp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    logp += 1e-4 * rng.gaussian();
    prices.timestamps[i] = static_cast<std::int64_t>(i) * 1000;
    prices.prices[i] = std::exp(logp);
  }
  const auto returns = volkit::marketdata::log_returns(prices);
  const auto bucketing = volkit::marketdata::Bucketing::by_duration(60 * 1000);
  for (auto _ : state) {
    auto vol = volkit::marketdata::realized_volatility(returns, bucketing);
    benchmark::DoNotOptimize(vol.sigmas.data());
  }
}
BENCHMARK(bm_realized_volatility)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
