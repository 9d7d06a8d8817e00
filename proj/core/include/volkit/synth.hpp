#pragma once

#include <cstdint>
#include <vector>

#include "volkit/marketdata.hpp"

namespace volkit::synth {

/// Lorenz system parameters and integration plan.
/// dx/dt = sigma (y - x), dy/dt = x (rho - z) - y, dz/dt = x y - beta z.
struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double x0 = 1.0;
  double y0 = 1.0;
  double z0 = 1.0;
  double dt = 0.01;
  std::int64_t n = 0;        // samples returned after the transient
  std::int64_t discard = 1000;  // leading steps dropped
};

struct LorenzTrajectory {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
};

/// Fixed-step RK4 integration; the first `discard` states are dropped and
/// exactly n samples are returned per axis. Deterministic for equal params.
/// A non-finite state aborts with the offending step index.
LorenzTrajectory gen_lorenz(const LorenzParams& params);

/// Conditional-variance recursion parameters for simulated returns.
struct GarchSimParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Simulates eps_t = z_t sqrt(h_t), h_t = omega + alpha eps_{t-1}^2
/// + beta h_{t-1}, started at the unconditional variance
/// h_0 = omega/(1-alpha-beta). Gaussian draws come from GaussianRng, so
/// output is bit-reproducible per seed. Timestamps land on a minute grid.
marketdata::ReturnSeries gen_garch(const GarchSimParams& params);

/// One sinusoid: amplitude * sin(2 pi t / period + phase).
struct Harmonic {
  double amplitude = 1.0;
  double period = 1.0;  // in samples, > 0
  double phase = 0.0;
};

/// s_t = sum_k A_k sin(2 pi t / T_k + phi_k) + Gaussian(0, noise_sigma),
/// t = 0..n-1. Deterministic per seed.
std::vector<double> gen_harmonic(const std::vector<Harmonic>& components, double noise_sigma,
                                 std::int64_t n, std::uint64_t seed);

}  // namespace volkit::synth
