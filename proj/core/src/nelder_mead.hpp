#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace volkit::detail {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::int64_t iterations = 0;
};

/// Derivative-free simplex minimizer (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5). The initial simplex offsets the start by
/// steps[i] along each axis. Converges when the simplex f-spread drops
/// below tol (floored at a few ulps of the best value so tight tolerances
/// terminate). The best-ever vertex is never discarded, so the result is
/// never worse than the starting point. Fully deterministic.
///
/// The objective must return +infinity (never NaN) for invalid points.
template <typename F>
NelderMeadResult nelder_mead(const F& f, const std::vector<double>& start,
                             const std::vector<double>& steps, double tol,
                             std::int64_t max_iter) {
  const std::size_t d = start.size();
  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(d + 1);
  simplex.push_back({start, f(start)});
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> x = start;
    x[i] += steps[i];
    simplex.push_back({std::move(x), 0.0});
    simplex.back().fx = f(simplex.back().x);
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
  };
  order();

  NelderMeadResult result;
  for (result.iterations = 0; result.iterations < max_iter; ++result.iterations) {
    const double best = simplex.front().fx;
    const double worst = simplex.back().fx;
    const double floor_tol =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(best));
    if (std::isfinite(best) && worst - best <= std::max(tol, floor_tol)) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t v = 0; v < d; ++v) {
      for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double coef) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = centroid[i] + coef * (centroid[i] - simplex[d].x[i]);
      }
      return x;
    };

    std::vector<double> reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < simplex[0].fx) {
      std::vector<double> expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[d] = {std::move(expanded), fe};
      } else {
        simplex[d] = {std::move(reflected), fr};
      }
    } else if (fr < simplex[d - 1].fx) {
      simplex[d] = {std::move(reflected), fr};
    } else {
      const bool outside = fr < simplex[d].fx;
      std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
      const double fc = f(contracted);
      if (outside ? fc <= fr : fc < simplex[d].fx) {
        simplex[d] = {std::move(contracted), fc};
      } else {
        for (std::size_t v = 1; v <= d; ++v) {
          for (std::size_t i = 0; i < d; ++i) {
            simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v].fx = f(simplex[v].x);
        }
      }
    }
    order();
  }

  result.x = simplex.front().x;
  result.fx = simplex.front().fx;
  return result;
}

}  // namespace volkit::detail
