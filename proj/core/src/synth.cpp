#include "volkit/synth.hpp"

#include <cmath>

#include "volkit/errors.hpp"
#include "volkit/rng.hpp"

namespace volkit::synth {

namespace {

struct State {
  double x, y, z;
};

State derivative(const LorenzParams& p, const State& s) {
  return {p.sigma * (s.y - s.x), s.x * (p.rho - s.z) - s.y, s.x * s.y - p.beta * s.z};
}

State rk4_step(const LorenzParams& p, const State& s, double dt) {
  const State k1 = derivative(p, s);
  const State k2 = derivative(p, {s.x + 0.5 * dt * k1.x, s.y + 0.5 * dt * k1.y,
                                  s.z + 0.5 * dt * k1.z});
  const State k3 = derivative(p, {s.x + 0.5 * dt * k2.x, s.y + 0.5 * dt * k2.y,
                                  s.z + 0.5 * dt * k2.z});
  const State k4 = derivative(p, {s.x + dt * k3.x, s.y + dt * k3.y, s.z + dt * k3.z});
  return {s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          s.z + dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

bool finite(const State& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
}

}  // namespace

LorenzTrajectory gen_lorenz(const LorenzParams& params) {
  if (params.dt <= 0) fail("bad-config", "dt must be positive");
  if (params.n < 0 || params.discard < 0) fail("bad-config", "n and discard must be >= 0");

  LorenzTrajectory out;
  out.x.reserve(static_cast<std::size_t>(params.n));
  out.y.reserve(static_cast<std::size_t>(params.n));
  out.z.reserve(static_cast<std::size_t>(params.n));

  State s{params.x0, params.y0, params.z0};
  const std::int64_t total = params.discard + params.n;
  for (std::int64_t step = 0; step < total; ++step) {
    if (step >= params.discard) {
      out.x.push_back(s.x);
      out.y.push_back(s.y);
      out.z.push_back(s.z);
    }
    s = rk4_step(params, s, params.dt);
    if (!finite(s)) {
      fail("non-finite-state",
           "integration diverged at step " + std::to_string(step) + "; reduce dt");
    }
  }
  return out;
}

marketdata::ReturnSeries gen_garch(const GarchSimParams& params) {
  if (params.omega <= 0) fail("bad-config", "omega must be positive");
  if (params.alpha < 0 || params.beta < 0) fail("bad-config", "alpha and beta must be >= 0");
  if (params.alpha + params.beta >= 1.0) {
    fail("stationarity-violation", "alpha + beta must be < 1");
  }
  if (params.n < 0) fail("bad-config", "n must be >= 0");

  GaussianRng rng(params.seed);
  marketdata::ReturnSeries out;
  out.timestamps.reserve(static_cast<std::size_t>(params.n));
  out.returns.reserve(static_cast<std::size_t>(params.n));

  double h = params.omega / (1.0 - params.alpha - params.beta);
  double eps_prev_sq = h;  // start the recursion at the unconditional level
  for (std::int64_t t = 0; t < params.n; ++t) {
    if (t > 0) h = params.omega + params.alpha * eps_prev_sq + params.beta * h;
    const double eps = rng.gaussian() * std::sqrt(h);
    eps_prev_sq = eps * eps;
    out.timestamps.push_back((t + 1) * timeutil::kMsPerMinute);
    out.returns.push_back(eps);
  }
  return out;
}

std::vector<double> gen_harmonic(const std::vector<Harmonic>& components, double noise_sigma,
                                 std::int64_t n, std::uint64_t seed) {
  for (const auto& c : components) {
    if (c.period <= 0) fail("bad-config", "harmonic period must be positive");
  }
  if (noise_sigma < 0) fail("bad-config", "noise sigma must be >= 0");
  if (n < 0) fail("bad-config", "n must be >= 0");

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  GaussianRng rng(seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    double s = 0.0;
    for (const auto& c : components) {
      s += c.amplitude * std::sin(kTwoPi * static_cast<double>(t) / c.period + c.phase);
    }
    if (noise_sigma > 0) s += noise_sigma * rng.gaussian();
    out.push_back(s);
  }
  return out;
}

}  // namespace volkit::synth
