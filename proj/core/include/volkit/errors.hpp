#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace volkit {

// Runtime failure carrying a stable machine-readable id alongside the
// human-readable message. The CLI prints the id and tests assert on it, so
// ids must not change once released. Current ids:
//
//   csv-malformed-row, csv-bad-header, non-increasing-timestamp,
//   non-positive-price, empty-series, series-too-short, no-estimable-buckets,
//   non-finite-input, non-finite-state, stationarity-violation, bad-config,
//   bad-interval, bad-duration, bad-grid, component-out-of-range,
//   degenerate-geometry, no-neighbor-pairs, degenerate-input,
//   optimizer-failure, zero-variance, io-error
class Error : public std::runtime_error {
 public:
  Error(std::string id, const std::string& message)
      : std::runtime_error(message), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

[[noreturn]] inline void fail(std::string id, const std::string& message) {
  throw Error(std::move(id), message);
}

}  // namespace volkit
