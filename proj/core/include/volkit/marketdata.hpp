#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "volkit/timeutil.hpp"

namespace volkit::marketdata {

/// Which OHLC column to keep at ingestion.
enum class PriceField { open, high, low, close };

/// Timestamped prices for one instrument.
/// Invariants: timestamps strictly increasing; every price > 0.
struct PriceSeries {
  std::vector<timeutil::EpochMs> timestamps;
  std::vector<double> prices;
  std::string pair_id;

  std::size_t size() const { return prices.size(); }
};

/// Raw trades. Timestamps are non-decreasing (simultaneous trades keep
/// file order); volumes is empty when the source had no volume column.
struct TickSeries {
  std::vector<timeutil::EpochMs> timestamps;
  std::vector<double> prices;
  std::vector<double> volumes;

  std::size_t size() const { return prices.size(); }
};

/// Log returns r_k = ln(P_{k+1}/P_k), stamped with the later price's time.
struct ReturnSeries {
  std::vector<timeutil::EpochMs> timestamps;
  std::vector<double> returns;

  std::size_t size() const { return returns.size(); }
};

/// Per-bucket realized volatility.
/// Invariants: sigmas >= 0; counts >= 2 for every emitted bucket.
/// skipped_buckets tallies non-empty buckets dropped for holding < 2 returns.
struct VolatilitySeries {
  std::vector<timeutil::EpochMs> bucket_starts;
  std::vector<double> sigmas;
  std::vector<std::int64_t> counts;
  std::int64_t skipped_buckets = 0;

  std::size_t size() const { return sigmas.size(); }
};

/// How returns are grouped before the per-bucket standard deviation.
/// Duration buckets are aligned to the UTC epoch grid, so day buckets
/// start at 00:00 UTC regardless of where the data begins.
struct Bucketing {
  enum class Kind { duration, count };

  static Bucketing by_duration(std::int64_t ms);
  static Bucketing by_count(std::int64_t n);

  Kind kind = Kind::duration;
  std::int64_t value = 0;  // milliseconds or observations per bucket
};

/// Parses OHLC CSV (header `timestamp,open,high,low,close`, ISO-8601 UTC
/// timestamps). Keeps the selected field. Errors name the offending line.
PriceSeries parse_ohlc_csv(std::istream& in, PriceField field = PriceField::close,
                           std::string pair_id = {});

/// Parses tick CSV (header `timestamp,price` or `timestamp,price,volume`,
/// millisecond ISO-8601 timestamps, non-decreasing).
TickSeries parse_tick_csv(std::istream& in);

/// Last trade price per interval; silent intervals are omitted. Output
/// timestamps are interval starts on the epoch-aligned grid.
PriceSeries resample_ticks(const TickSeries& ticks, std::int64_t interval_ms);

/// returns[k] = ln(prices[k+1]/prices[k]); requires length >= 2.
ReturnSeries log_returns(const PriceSeries& prices);

/// Sample standard deviation (T-1 denominator) of returns per bucket.
/// Buckets holding < 2 returns are skipped and tallied; an input yielding
/// no estimable bucket at all is an error.
VolatilitySeries realized_volatility(const ReturnSeries& returns, const Bucketing& bucketing);

/// Canonical CSVs. Prices: `timestamp,price`. Volatility:
/// `bucket_start,sigma,count`. Doubles use shortest round-trip formatting.
void write_price_csv(std::ostream& out, const PriceSeries& series);
PriceSeries read_price_csv(std::istream& in, std::string pair_id = {});
void write_volatility_csv(std::ostream& out, const VolatilitySeries& series);
VolatilitySeries read_volatility_csv(std::istream& in);

}  // namespace volkit::marketdata
