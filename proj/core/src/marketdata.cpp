#include "volkit/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "volkit/csvio.hpp"
#include "volkit/errors.hpp"

namespace volkit::marketdata {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

[[noreturn]] void fail_row(const char* id, std::int64_t line, const std::string& what) {
  fail(id, "line " + std::to_string(line) + ": " + what);
}

void expect_header(csv::Reader& reader, const std::vector<std::vector<std::string>>& accepted,
                   const std::string& described, std::size_t& n_cols,
                   std::size_t& matched_index) {
  csv::Record rec;
  if (!reader.next(rec)) fail("csv-bad-header", "empty input, expected header " + described);
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (rec.fields == accepted[i]) {
      n_cols = accepted[i].size();
      matched_index = i;
      return;
    }
  }
  fail("csv-bad-header", "line " + std::to_string(rec.line) + ": expected header " + described);
}

timeutil::EpochMs parse_ts_field(const std::string& s, std::int64_t line) {
  const auto ts = timeutil::parse_iso8601_utc(s);
  if (!ts) fail_row("csv-malformed-row", line, "bad timestamp \"" + s + "\"");
  return *ts;
}

double parse_num_field(const std::string& s, std::int64_t line, const char* what) {
  const auto v = csv::parse_double(s);
  if (!v || !std::isfinite(*v)) {
    fail_row("csv-malformed-row", line, std::string("bad ") + what + " \"" + s + "\"");
  }
  return *v;
}

/// Mean and sample standard deviation (T-1) accumulated in sorted order,
/// so the estimate does not depend on within-bucket ordering.
double sample_std(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

Bucketing Bucketing::by_duration(std::int64_t ms) {
  if (ms <= 0) fail("bad-interval", "bucket duration must be positive");
  return Bucketing{Kind::duration, ms};
}

Bucketing Bucketing::by_count(std::int64_t n) {
  if (n < 2) fail("bad-interval", "bucket count must be at least 2");
  return Bucketing{Kind::count, n};
}

PriceSeries parse_ohlc_csv(std::istream& in, PriceField field, std::string pair_id) {
  csv::Reader reader(in);
  std::size_t n_cols = 0, variant = 0;
  expect_header(reader, {{"timestamp", "open", "high", "low", "close"}},
                "timestamp,open,high,low,close", n_cols, variant);
  const std::size_t price_col = 1 + static_cast<std::size_t>(field);

  PriceSeries out;
  out.pair_id = std::move(pair_id);
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() != n_cols) {
      fail_row("csv-malformed-row", rec.line,
               "expected " + std::to_string(n_cols) + " fields, got " +
                   std::to_string(rec.fields.size()));
    }
    const timeutil::EpochMs ts = parse_ts_field(rec.fields[0], rec.line);
    const double price = parse_num_field(rec.fields[price_col], rec.line, "price");
    if (price <= 0.0) {
      fail_row("non-positive-price", rec.line, "price " + rec.fields[price_col]);
    }
    if (!out.timestamps.empty() && ts <= out.timestamps.back()) {
      fail_row("non-increasing-timestamp", rec.line, "timestamp " + rec.fields[0]);
    }
    out.timestamps.push_back(ts);
    out.prices.push_back(price);
  }
  return out;
}

TickSeries parse_tick_csv(std::istream& in) {
  csv::Reader reader(in);
  std::size_t n_cols = 0, variant = 0;
  expect_header(reader,
                {{"timestamp", "price"}, {"timestamp", "price", "volume"}},
                "timestamp,price[,volume]", n_cols, variant);

  TickSeries out;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() != n_cols) {
      fail_row("csv-malformed-row", rec.line,
               "expected " + std::to_string(n_cols) + " fields, got " +
                   std::to_string(rec.fields.size()));
    }
    const timeutil::EpochMs ts = parse_ts_field(rec.fields[0], rec.line);
    const double price = parse_num_field(rec.fields[1], rec.line, "price");
    if (price <= 0.0) fail_row("non-positive-price", rec.line, "price " + rec.fields[1]);
    if (!out.timestamps.empty() && ts < out.timestamps.back()) {
      fail_row("non-increasing-timestamp", rec.line, "timestamp " + rec.fields[0]);
    }
    if (n_cols == 3) {
      const double volume = parse_num_field(rec.fields[2], rec.line, "volume");
      if (volume < 0.0) fail_row("csv-malformed-row", rec.line, "negative volume");
      out.volumes.push_back(volume);
    }
    out.timestamps.push_back(ts);
    out.prices.push_back(price);
  }
  return out;
}

PriceSeries resample_ticks(const TickSeries& ticks, std::int64_t interval_ms) {
  if (interval_ms <= 0) fail("bad-interval", "resample interval must be positive");
  if (ticks.size() == 0) fail("empty-series", "no ticks to resample");

  PriceSeries out;
  std::int64_t current_bucket = 0;
  bool have_bucket = false;
  double last_price = 0.0;

  auto flush = [&] {
    out.timestamps.push_back(current_bucket * interval_ms);
    out.prices.push_back(last_price);
  };

  for (std::size_t i = 0; i < ticks.size(); ++i) {
    const std::int64_t bucket = floor_div(ticks.timestamps[i], interval_ms);
    if (have_bucket && bucket != current_bucket) flush();
    current_bucket = bucket;
    last_price = ticks.prices[i];
    have_bucket = true;
  }
  flush();
  return out;
}

ReturnSeries log_returns(const PriceSeries& prices) {
  if (prices.size() < 2) {
    fail("series-too-short", "need at least 2 prices, got " + std::to_string(prices.size()));
  }
  ReturnSeries out;
  out.timestamps.reserve(prices.size() - 1);
  out.returns.reserve(prices.size() - 1);
  for (std::size_t k = 0; k + 1 < prices.size(); ++k) {
    out.timestamps.push_back(prices.timestamps[k + 1]);
    out.returns.push_back(std::log(prices.prices[k + 1] / prices.prices[k]));
  }
  return out;
}

VolatilitySeries realized_volatility(const ReturnSeries& returns, const Bucketing& bucketing) {
  if (bucketing.value <= 0) fail("bad-interval", "bucketing value must be positive");

  VolatilitySeries out;
  std::vector<double> bucket_values;
  timeutil::EpochMs bucket_start = 0;

  auto flush = [&] {
    if (bucket_values.empty()) return;
    if (bucket_values.size() < 2) {
      ++out.skipped_buckets;
    } else {
      out.bucket_starts.push_back(bucket_start);
      out.counts.push_back(static_cast<std::int64_t>(bucket_values.size()));
      out.sigmas.push_back(sample_std(bucket_values));
    }
    bucket_values.clear();
  };

  if (bucketing.kind == Bucketing::Kind::duration) {
    std::int64_t current_index = 0;
    bool have_bucket = false;
    for (std::size_t i = 0; i < returns.size(); ++i) {
      const std::int64_t index = floor_div(returns.timestamps[i], bucketing.value);
      if (have_bucket && index < current_index) {
        fail("non-increasing-timestamp", "returns are not in time order");
      }
      if (have_bucket && index != current_index) flush();
      current_index = index;
      have_bucket = true;
      if (bucket_values.empty()) bucket_start = index * bucketing.value;
      bucket_values.push_back(returns.returns[i]);
    }
    flush();
  } else {
    for (std::size_t i = 0; i < returns.size(); ++i) {
      if (bucket_values.empty()) bucket_start = returns.timestamps[i];
      bucket_values.push_back(returns.returns[i]);
      if (bucket_values.size() == static_cast<std::size_t>(bucketing.value)) flush();
    }
    flush();
  }

  if (out.size() == 0) fail("no-estimable-buckets", "no bucket held 2 or more returns");
  return out;
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
  out << "timestamp,price\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << timeutil::format_iso8601_utc(series.timestamps[i]) << ','
        << csv::format_double(series.prices[i]) << '\n';
  }
  if (!out) fail("io-error", "failed writing price CSV");
}

PriceSeries read_price_csv(std::istream& in, std::string pair_id) {
  csv::Reader reader(in);
  std::size_t n_cols = 0, variant = 0;
  expect_header(reader, {{"timestamp", "price"}}, "timestamp,price", n_cols, variant);

  PriceSeries out;
  out.pair_id = std::move(pair_id);
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() != 2) fail_row("csv-malformed-row", rec.line, "expected 2 fields");
    const timeutil::EpochMs ts = parse_ts_field(rec.fields[0], rec.line);
    const double price = parse_num_field(rec.fields[1], rec.line, "price");
    if (price <= 0.0) fail_row("non-positive-price", rec.line, "price " + rec.fields[1]);
    if (!out.timestamps.empty() && ts <= out.timestamps.back()) {
      fail_row("non-increasing-timestamp", rec.line, "timestamp " + rec.fields[0]);
    }
    out.timestamps.push_back(ts);
    out.prices.push_back(price);
  }
  return out;
}

void write_volatility_csv(std::ostream& out, const VolatilitySeries& series) {
  out << "bucket_start,sigma,count\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << timeutil::format_iso8601_utc(series.bucket_starts[i]) << ','
        << csv::format_double(series.sigmas[i]) << ',' << series.counts[i] << '\n';
  }
  if (!out) fail("io-error", "failed writing volatility CSV");
}

VolatilitySeries read_volatility_csv(std::istream& in) {
  csv::Reader reader(in);
  std::size_t n_cols = 0, variant = 0;
  expect_header(reader, {{"bucket_start", "sigma", "count"}}, "bucket_start,sigma,count", n_cols,
                variant);

  VolatilitySeries out;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() != 3) fail_row("csv-malformed-row", rec.line, "expected 3 fields");
    const timeutil::EpochMs ts = parse_ts_field(rec.fields[0], rec.line);
    const double sigma = parse_num_field(rec.fields[1], rec.line, "sigma");
    const auto count = csv::parse_int(rec.fields[2]);
    if (sigma < 0.0) fail_row("csv-malformed-row", rec.line, "negative sigma");
    if (!count || *count < 2) fail_row("csv-malformed-row", rec.line, "count must be >= 2");
    if (!out.bucket_starts.empty() && ts <= out.bucket_starts.back()) {
      fail_row("non-increasing-timestamp", rec.line, "bucket_start " + rec.fields[0]);
    }
    out.bucket_starts.push_back(ts);
    out.sigmas.push_back(sigma);
    out.counts.push_back(*count);
  }
  return out;
}

}  // namespace volkit::marketdata
