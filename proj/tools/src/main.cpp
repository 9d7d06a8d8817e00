#include <fstream>
#include <iostream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volkit/csvio.hpp"
#include "volkit/dynsys.hpp"
#include "volkit/errors.hpp"
#include "volkit/evaluate.hpp"
#include "volkit/forecasters.hpp"
#include "volkit/garch.hpp"
#include "volkit/marketdata.hpp"
#include "volkit/parallel.hpp"
#include "volkit/ssa.hpp"
#include "volkit/synth.hpp"
#include "volkit/timeutil.hpp"

namespace {

using volkit::fail;
namespace csv = volkit::csv;
namespace dynsys = volkit::dynsys;
namespace evaluate = volkit::evaluate;
namespace garch = volkit::garch;
namespace md = volkit::marketdata;
namespace ssa = volkit::ssa;
namespace synth = volkit::synth;
namespace timeutil = volkit::timeutil;

/// Opens an input; "-" reads standard input.
std::unique_ptr<std::istream> open_input(const std::string& path) {
  if (path == "-") return std::make_unique<std::istream>(std::cin.rdbuf());
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) fail("io-error", "cannot open input file " + path);
  return file;
}

/// Buffers output and writes it on success only, so a failing command
/// never leaves a truncated file; "-" writes to standard output.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}

  std::ostream& stream() { return buffer_; }

  void commit() {
    if (path_ == "-") {
      std::cout << buffer_.str();
      std::cout.flush();
      if (!std::cout) fail("io-error", "failed writing to standard output");
      return;
    }
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) fail("io-error", "cannot open output file " + path_);
    file << buffer_.str();
    file.flush();
    if (!file) fail("io-error", "failed writing " + path_);
  }

 private:
  std::string path_;
  std::ostringstream buffer_;
};

/// A plain series of values with per-sample timestamps. Timestamps come
/// from a `bucket_start`/`timestamp` column when the file has one and are
/// synthesized on a minute grid otherwise.
struct Series {
  std::vector<double> values;
  std::vector<timeutil::EpochMs> timestamps;
};

/// Accepts any headered CSV holding one value column: the first column
/// named sigma/value/return/price/x, or the only column of a one-column
/// file.
Series read_series(const std::string& path) {
  const auto in = open_input(path);
  csv::Reader reader(*in);
  csv::Record header;
  if (!reader.next(header)) fail("csv-bad-header", "empty input, expected a header row");

  static const std::vector<std::string> kValueNames = {"sigma", "value", "return", "price", "x"};
  std::size_t value_col = header.fields.size();
  for (std::size_t i = 0; i < header.fields.size() && value_col == header.fields.size(); ++i) {
    for (const auto& name : kValueNames) {
      if (header.fields[i] == name) {
        value_col = i;
        break;
      }
    }
  }
  if (value_col == header.fields.size()) {
    if (header.fields.size() == 1) {
      value_col = 0;
    } else {
      fail("csv-bad-header",
           "no value column found (expected sigma, value, return, price or x)");
    }
  }
  std::size_t ts_col = header.fields.size();
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    if (header.fields[i] == "bucket_start" || header.fields[i] == "timestamp") {
      ts_col = i;
      break;
    }
  }

  Series out;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() != header.fields.size()) {
      fail("csv-malformed-row", "line " + std::to_string(rec.line) + ": expected " +
                                    std::to_string(header.fields.size()) + " fields");
    }
    const auto value = csv::parse_double(rec.fields[value_col]);
    if (!value) {
      fail("csv-malformed-row",
           "line " + std::to_string(rec.line) + ": bad value \"" + rec.fields[value_col] + "\"");
    }
    if (ts_col != header.fields.size()) {
      const auto ts = timeutil::parse_iso8601_utc(rec.fields[ts_col]);
      if (!ts) {
        fail("csv-malformed-row", "line " + std::to_string(rec.line) + ": bad timestamp \"" +
                                      rec.fields[ts_col] + "\"");
      }
      out.timestamps.push_back(*ts);
    } else {
      out.timestamps.push_back(static_cast<timeutil::EpochMs>(out.values.size()) *
                               timeutil::kMsPerMinute);
    }
    out.values.push_back(*value);
  }
  return out;
}

md::VolatilitySeries read_volatility(const std::string& path) {
  const auto in = open_input(path);
  return md::read_volatility_csv(*in);
}

std::int64_t parse_duration_flag(const std::string& text, const char* flag) {
  const auto ms = timeutil::parse_duration_ms(text);
  if (!ms) {
    fail("bad-duration", std::string(flag) + " wants <count><unit> with unit ms/s/m/h/d, got \"" +
                             text + "\"");
  }
  return *ms;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = csv::parse_int(item);
    if (!v) fail("bad-grid", std::string(flag) + ": bad integer \"" + item + "\"");
    out.push_back(static_cast<int>(*v));
  }
  if (out.empty()) fail("bad-grid", std::string(flag) + ": empty list");
  return out;
}

int resolve_lag(const std::string& lag_text, std::span<const double> series) {
  if (lag_text == "auto") return dynsys::autocorr_lag(series);
  const auto v = csv::parse_int(lag_text);
  if (!v || *v < 1) fail("bad-config", "--lag wants a positive integer or \"auto\"");
  return static_cast<int>(*v);
}

md::PriceField parse_field(const std::string& name) {
  if (name == "open") return md::PriceField::open;
  if (name == "high") return md::PriceField::high;
  if (name == "low") return md::PriceField::low;
  if (name == "close") return md::PriceField::close;
  fail("bad-config", "--field wants one of open/high/low/close");
}

nlohmann::ordered_json coeff_json(const std::vector<double>& values) {
  if (values.size() == 1) return values[0];
  return values;
}

// ---------------------------------------------------------------------------
// Subcommand options. Each struct owns the flag storage for one command.

struct IngestOpts {
  std::string input = "-";
  std::string out = "-";
  std::string field = "close";
  std::string pair;
  bool tick = false;
  std::string interval;
};

void run_ingest(const IngestOpts& opt) {
  md::PriceSeries prices;
  if (opt.tick) {
    if (opt.interval.empty()) fail("bad-config", "--tick requires --interval");
    const auto in = open_input(opt.input);
    const md::TickSeries ticks = md::parse_tick_csv(*in);
    prices = md::resample_ticks(ticks, parse_duration_flag(opt.interval, "--interval"));
    prices.pair_id = opt.pair;
  } else {
    const auto in = open_input(opt.input);
    prices = md::parse_ohlc_csv(*in, parse_field(opt.field), opt.pair);
  }
  Output out(opt.out);
  md::write_price_csv(out.stream(), prices);
  out.commit();
}

struct VolOpts {
  std::string input = "-";
  std::string out = "-";
  std::string field = "close";
  bool tick = false;
  bool prices = false;
  bool returns = false;
  std::string interval;
  std::string bucket;
  std::int64_t bucket_count = 0;
};

void run_vol(const VolOpts& opt) {
  if (opt.tick + opt.prices + opt.returns > 1) {
    fail("bad-config", "--tick, --prices and --returns are mutually exclusive");
  }
  if (opt.bucket.empty() == (opt.bucket_count == 0)) {
    fail("bad-config", "exactly one of --bucket or --bucket-count is required");
  }

  md::ReturnSeries returns;
  if (opt.returns) {
    const Series series = read_series(opt.input);
    returns.timestamps = series.timestamps;
    returns.returns = series.values;
  } else if (opt.prices) {
    const auto in = open_input(opt.input);
    returns = md::log_returns(md::read_price_csv(*in));
  } else if (opt.tick) {
    if (opt.interval.empty()) fail("bad-config", "--tick requires --interval");
    const auto in = open_input(opt.input);
    const md::TickSeries ticks = md::parse_tick_csv(*in);
    returns = md::log_returns(
        md::resample_ticks(ticks, parse_duration_flag(opt.interval, "--interval")));
  } else {
    const auto in = open_input(opt.input);
    returns = md::log_returns(md::parse_ohlc_csv(*in, parse_field(opt.field)));
  }

  const md::Bucketing bucketing =
      opt.bucket.empty() ? md::Bucketing::by_count(opt.bucket_count)
                         : md::Bucketing::by_duration(parse_duration_flag(opt.bucket, "--bucket"));
  const md::VolatilitySeries vol = md::realized_volatility(returns, bucketing);
  if (vol.skipped_buckets > 0) {
    std::cerr << "note: skipped " << vol.skipped_buckets << " bucket(s) with fewer than 2 returns"
              << std::endl;
  }
  Output out(opt.out);
  md::write_volatility_csv(out.stream(), vol);
  out.commit();
}

struct SsaDecomposeOpts {
  std::string input = "-";
  std::string out = "-";
  int window_length = 0;
  std::string components = "0";
  std::string recon_out;
};

void run_ssa_decompose(const SsaDecomposeOpts& opt) {
  const Series series = read_series(opt.input);
  const ssa::SsaDecomposition decomp = ssa::decompose(series.values, opt.window_length);

  double total = 0.0;
  for (Eigen::Index i = 0; i < decomp.eigenvalues.size(); ++i) total += decomp.eigenvalues[i];
  Output out(opt.out);
  out.stream() << "rank,eigenvalue,share\n";
  for (Eigen::Index i = 0; i < decomp.eigenvalues.size(); ++i) {
    const double share = total > 0.0 ? decomp.eigenvalues[i] / total : 0.0;
    out.stream() << i << ',' << csv::format_double(decomp.eigenvalues[i]) << ','
                 << csv::format_double(share) << '\n';
  }
  out.commit();

  if (!opt.recon_out.empty()) {
    const std::vector<int> components = parse_int_list(opt.components, "--components");
    std::vector<std::vector<double>> recon;
    recon.reserve(components.size());
    for (int c : components) recon.push_back(ssa::reconstruct(decomp, {c}));
    Output rout(opt.recon_out);
    rout.stream() << "step";
    for (int c : components) rout.stream() << ",c" << c;
    rout.stream() << '\n';
    for (std::size_t t = 0; t < series.values.size(); ++t) {
      rout.stream() << t;
      for (const auto& r : recon) rout.stream() << ',' << csv::format_double(r[t]);
      rout.stream() << '\n';
    }
    rout.commit();
  }
}

struct SsaForecastOpts {
  std::string input = "-";
  std::string out = "-";
  int window = 30;
  int window_length = 3;
  int component = 0;
  unsigned threads = 1;
};

void run_ssa_forecast(const SsaForecastOpts& opt) {
  const Series series = read_series(opt.input);
  const ssa::SsaConfig config{opt.window_length, opt.window, opt.component};
  config.validate();
  const std::size_t n = series.values.size();
  if (n < static_cast<std::size_t>(opt.window)) {
    fail("series-too-short", "series shorter than the rolling window");
  }

  // One label per step i in [W, N]: the window ending at i-1 predicts the
  // direction of the next bucket, so the final row looks past the data.
  const std::size_t n_steps = n - static_cast<std::size_t>(opt.window) + 1;
  std::vector<evaluate::ClassLabel> labels(n_steps);
  const std::span<const double> values(series.values);
  volkit::parallel_for(n_steps, opt.threads, [&](std::size_t s) {
    labels[s] = ssa::ssa_forecast_sign(
        values.subspan(s, static_cast<std::size_t>(opt.window)), config);
  });

  Output out(opt.out);
  out.stream() << "step,predicted\n";
  for (std::size_t s = 0; s < n_steps; ++s) {
    out.stream() << opt.window + static_cast<std::int64_t>(s) << ','
                 << evaluate::to_string(labels[s]) << '\n';
  }
  out.commit();
}

struct LyapunovEstimateOpts {
  std::string input = "-";
  std::string out = "-";
  std::string curve_out;
  int dim = 3;
  std::string lag = "auto";
  int theiler = -1;
  int max_steps = 100;
  int fit_min = 0;
  int fit_max = 25;
};

dynsys::EmbedConfig embed_config_for(const LyapunovEstimateOpts& opt,
                                     std::span<const double> values) {
  dynsys::EmbedConfig config;
  config.dim = opt.dim;
  config.lag = resolve_lag(opt.lag, values);
  config.theiler = opt.theiler;
  config.max_steps = opt.max_steps;
  config.fit_min = opt.fit_min;
  config.fit_max = opt.fit_max;
  return config;
}

void run_lyapunov_estimate(const LyapunovEstimateOpts& opt) {
  const Series series = read_series(opt.input);
  const dynsys::EmbedConfig config = embed_config_for(opt, series.values);
  const dynsys::LyapunovEstimate est = dynsys::estimate_lambda1(series.values, config);

  Output out(opt.out);
  out.stream() << "lambda1,intercept,r2,n_pairs\n"
               << csv::format_double(est.lambda1) << ',' << csv::format_double(est.intercept)
               << ',' << csv::format_double(est.fit_r2) << ',' << est.n_pairs << '\n';
  out.commit();

  if (!opt.curve_out.empty()) {
    Output cout_(opt.curve_out);
    cout_.stream() << "step,mean_log_distance,pairs\n";
    for (std::size_t k = 0; k < est.divergence_curve.size(); ++k) {
      if (est.curve_pairs[k] < 1) continue;
      cout_.stream() << k << ',' << csv::format_double(est.divergence_curve[k]) << ','
                     << est.curve_pairs[k] << '\n';
    }
    cout_.commit();
  }
  if (est.low_confidence()) {
    std::cerr << "note: fit r2 " << est.fit_r2 << " is below 0.9; estimate is low-confidence"
              << std::endl;
  }
}

struct LyapunovSweepOpts {
  LyapunovEstimateOpts base;
  std::int64_t n_from = 60;
  std::int64_t n_to = 3000;
  std::int64_t n_step = 10;
};

void run_lyapunov_sweep(const LyapunovSweepOpts& opt) {
  const Series series = read_series(opt.base.input);
  if (opt.n_from < 1 || opt.n_step < 1 || opt.n_to < opt.n_from) {
    fail("bad-grid", "prefix grid wants 1 <= n-from <= n-to and n-step >= 1");
  }
  const dynsys::EmbedConfig config = embed_config_for(opt.base, series.values);
  std::vector<std::int64_t> grid;
  for (std::int64_t n = opt.n_from; n <= opt.n_to; n += opt.n_step) grid.push_back(n);
  const auto rows = dynsys::convergence_study(series.values, grid, config);

  Output out(opt.base.out);
  out.stream() << "n,lambda1,r2,status\n";
  for (const auto& row : rows) {
    out.stream() << row.n << ',';
    if (row.status == "ok") {
      out.stream() << csv::format_double(row.lambda1) << ',' << csv::format_double(row.fit_r2);
    } else {
      out.stream() << ',';
    }
    out.stream() << ',' << row.status << '\n';
  }
  out.commit();
}

struct GarchFitOpts {
  std::string input = "-";
  std::string out = "-";
  int p = 1;
  int q = 1;
  int mean_q = 0;
};

void run_garch_fit(const GarchFitOpts& opt) {
  const Series series = read_series(opt.input);
  const garch::MeanModel mean = garch::fit_mean_model(series.values, opt.mean_q);
  const garch::GarchFit fit = garch::fit_garch(mean.residuals, opt.p, opt.q);
  const garch::InfoCriteria ic = garch::information_criteria(
      fit.loglik, fit.n_params(), static_cast<double>(fit.n_obs));

  nlohmann::ordered_json doc;
  doc["omega"] = fit.omega;
  doc["alpha"] = coeff_json(fit.alpha);
  doc["beta"] = coeff_json(fit.beta);
  doc["loglik"] = fit.loglik;
  doc["aic"] = ic.aic;
  doc["bic"] = ic.bic;
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  Output out(opt.out);
  out.stream() << doc.dump(2) << '\n';
  out.commit();
}

struct GarchForecastOpts {
  GarchFitOpts base;
  int horizon = 1;
};

void run_garch_forecast(const GarchForecastOpts& opt) {
  const Series series = read_series(opt.base.input);
  const garch::MeanModel mean = garch::fit_mean_model(series.values, opt.base.mean_q);
  const garch::GarchFit fit = garch::fit_garch(mean.residuals, opt.base.p, opt.base.q);
  const std::vector<double> path = garch::forecast_sigma_path(fit, opt.horizon);

  Output out(opt.base.out);
  out.stream() << "step,sigma_hat\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out.stream() << k + 1 << ',' << csv::format_double(path[k]) << '\n';
  }
  out.commit();
}

struct BacktestOpts {
  std::string input = "-";
  std::string out = "-";
  std::string steps_out;
  std::string model = "ssa";
  int window = 523;
  int horizon = 1;
  unsigned threads = 1;
  // ssa
  int window_length = 3;
  int component = 0;
  // lyapunov
  int dim = 3;
  std::string lag = "auto";
  int theiler = -1;
  int max_steps = 100;
  int fit_min = 0;
  int fit_max = 25;
  // garch
  int p = 1;
  int q = 1;
  int mean_q = 0;
};

std::unique_ptr<evaluate::Forecaster> make_forecaster(const BacktestOpts& opt, int horizon) {
  if (opt.model == "ssa") {
    const ssa::SsaConfig config{opt.window_length, opt.window, opt.component};
    return std::make_unique<evaluate::SsaForecaster>(config);
  }
  if (opt.model == "lyapunov") {
    dynsys::EmbedConfig config;
    config.dim = opt.dim;
    config.theiler = opt.theiler;
    config.max_steps = opt.max_steps;
    config.fit_min = opt.fit_min;
    config.fit_max = opt.fit_max;
    const bool auto_lag = opt.lag == "auto";
    if (!auto_lag) {
      const auto v = csv::parse_int(opt.lag);
      if (!v || *v < 1) fail("bad-config", "--lag wants a positive integer or \"auto\"");
      config.lag = static_cast<int>(*v);
    }
    return std::make_unique<evaluate::LyapunovForecaster>(config, auto_lag);
  }
  if (opt.model == "garch") {
    return std::make_unique<evaluate::GarchForecaster>(opt.p, opt.q, opt.mean_q, horizon);
  }
  fail("bad-config", "--model wants ssa, lyapunov or garch");
}

void run_backtest(const BacktestOpts& opt) {
  const md::VolatilitySeries sigmas = read_volatility(opt.input);
  const auto model = make_forecaster(opt, opt.horizon);
  const evaluate::BacktestReport report =
      evaluate::rolling_backtest(sigmas, *model, opt.window, opt.horizon, opt.threads);

  Output out(opt.out);
  evaluate::write_report_json(out.stream(), report);
  out.commit();
  if (!opt.steps_out.empty()) {
    Output sout(opt.steps_out);
    evaluate::write_steps_csv(sout.stream(), report);
    sout.commit();
  }
}

struct GridSearchOpts {
  std::string input = "-";
  std::string out = "-";
  std::string best_out;
  std::string w_grid = "20,30,40,50,60,70,80,90,100,150,200,250,300,350,400";
  std::string l_grid = "3,4,5,6,7,8,9,10";
  std::string s_grid = "0,1,2";
  unsigned threads = 1;
};

void run_gridsearch(const GridSearchOpts& opt) {
  const md::VolatilitySeries sigmas = read_volatility(opt.input);
  const evaluate::GridResult result = evaluate::ssa_grid_search(
      sigmas, parse_int_list(opt.w_grid, "--w-grid"), parse_int_list(opt.l_grid, "--l-grid"),
      parse_int_list(opt.s_grid, "--s-grid"), opt.threads);

  Output out(opt.out);
  evaluate::write_grid_csv(out.stream(), result);
  out.commit();

  if (!opt.best_out.empty()) {
    if (!result.best_index) fail("bad-grid", "no admissible grid cell to report as best");
    const evaluate::GridRow& best = result.rows[*result.best_index];
    nlohmann::ordered_json doc;
    doc["W"] = best.window;
    doc["L"] = best.length;
    doc["S"] = best.component;
    doc["accuracy"] = best.accuracy;
    doc["f1"] = best.f1;
    doc["n_evaluated"] = best.n_evaluated;
    Output bout(opt.best_out);
    bout.stream() << doc.dump(2) << '\n';
    bout.commit();
  }
}

struct HorizonSweepOpts {
  BacktestOpts base;  // model construction reuses the backtest flags
  std::string horizons = "1";
};

void run_horizon_sweep(const HorizonSweepOpts& opt) {
  const md::VolatilitySeries sigmas = read_volatility(opt.base.input);
  // The sweep varies the scoring alignment; a garch model forecasts with
  // its own fixed horizon (default 1).
  const auto model = make_forecaster(opt.base, opt.base.horizon);
  const auto rows = evaluate::horizon_sweep(sigmas, *model, opt.base.window,
                                            parse_int_list(opt.horizons, "--horizons"),
                                            opt.base.threads);
  Output out(opt.base.out);
  evaluate::write_horizon_csv(out.stream(), rows);
  out.commit();
}

struct MetricsOpts {
  std::string steps = "-";
  std::string out = "-";
};

void run_metrics(const MetricsOpts& opt) {
  const auto in = open_input(opt.steps);
  csv::Reader reader(*in);
  csv::Record rec;
  if (!reader.next(rec) ||
      rec.fields != std::vector<std::string>{"step", "timestamp", "predicted", "actual"}) {
    fail("csv-bad-header", "expected header step,timestamp,predicted,actual");
  }
  evaluate::ConfusionMatrix confusion;
  while (reader.next(rec)) {
    if (rec.fields.size() != 4) {
      fail("csv-malformed-row", "line " + std::to_string(rec.line) + ": expected 4 fields");
    }
    const auto predicted = evaluate::parse_label(rec.fields[2]);
    const auto actual = evaluate::parse_label(rec.fields[3]);
    if (!predicted || !actual) {
      fail("csv-malformed-row",
           "line " + std::to_string(rec.line) + ": labels must be I or II");
    }
    confusion.add(*predicted, *actual);
  }
  const evaluate::Metrics m = evaluate::metrics(confusion);

  nlohmann::ordered_json doc;
  doc["tp"] = confusion.tp;
  doc["fp"] = confusion.fp;
  doc["tn"] = confusion.tn;
  doc["fn"] = confusion.fn;
  doc["accuracy"] = m.accuracy;
  doc["precision"] = m.precision;
  doc["recall"] = m.recall;
  doc["f1"] = m.f1;
  Output out(opt.out);
  out.stream() << doc.dump(2) << '\n';
  out.commit();
}

struct SynthLorenzOpts {
  std::string out = "-";
  synth::LorenzParams params;
};

void run_synth_lorenz(const SynthLorenzOpts& opt) {
  const synth::LorenzTrajectory traj = synth::gen_lorenz(opt.params);
  Output out(opt.out);
  out.stream() << "x,y,z\n";
  for (std::size_t i = 0; i < traj.x.size(); ++i) {
    out.stream() << csv::format_double(traj.x[i]) << ',' << csv::format_double(traj.y[i]) << ','
                 << csv::format_double(traj.z[i]) << '\n';
  }
  out.commit();
}

struct SynthGarchOpts {
  std::string out = "-";
  synth::GarchSimParams params;
};

void run_synth_garch(const SynthGarchOpts& opt) {
  const md::ReturnSeries returns = synth::gen_garch(opt.params);
  Output out(opt.out);
  out.stream() << "return\n";
  for (double r : returns.returns) out.stream() << csv::format_double(r) << '\n';
  out.commit();
}

struct SynthHarmonicOpts {
  std::string out = "-";
  std::string components = "1:8:0";
  double noise_sigma = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

void run_synth_harmonic(const SynthHarmonicOpts& opt) {
  std::vector<synth::Harmonic> components;
  std::stringstream ss(opt.components);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream part(item);
    std::string a, t, phi;
    if (!std::getline(part, a, ':') || !std::getline(part, t, ':') || !std::getline(part, phi)) {
      fail("bad-config", "--components wants amplitude:period:phase triples");
    }
    const auto av = csv::parse_double(a);
    const auto tv = csv::parse_double(t);
    const auto pv = csv::parse_double(phi);
    if (!av || !tv || !pv) fail("bad-config", "--components wants numeric triples");
    components.push_back({*av, *tv, *pv});
  }
  const std::vector<double> series =
      synth::gen_harmonic(components, opt.noise_sigma, opt.n, opt.seed);
  Output out(opt.out);
  out.stream() << "value\n";
  for (double v : series) out.stream() << csv::format_double(v) << '\n';
  out.commit();
}

void add_lyapunov_flags(CLI::App* cmd, LyapunovEstimateOpts& opt) {
  cmd->add_option("--dim", opt.dim, "Embedding dimension");
  cmd->add_option("--lag", opt.lag, "Embedding delay in samples, or \"auto\"");
  cmd->add_option("--theiler", opt.theiler, "Neighbor exclusion window (-1: dim*lag)");
  cmd->add_option("--max-steps", opt.max_steps, "Divergence horizon in samples");
  cmd->add_option("--fit-min", opt.fit_min, "First step of the slope fit");
  cmd->add_option("--fit-max", opt.fit_max, "Last step of the slope fit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volatility-direction forecasting toolkit"};
  app.set_config("--config", "", "Read defaults from a key=value file; flags win");
  app.require_subcommand(1);
  app.get_formatter()->column_width(32);

  IngestOpts ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize OHLC or tick data to a price CSV");
  ingest_cmd->add_option("--input", ingest.input, "OHLC or tick CSV (\"-\": stdin)");
  ingest_cmd->add_option("--out", ingest.out, "Price CSV (\"-\": stdout)");
  ingest_cmd->add_option("--field", ingest.field, "OHLC column: open/high/low/close");
  ingest_cmd->add_option("--pair", ingest.pair, "Instrument label to carry through");
  ingest_cmd->add_flag("--tick", ingest.tick, "Input is tick data");
  ingest_cmd->add_option("--interval", ingest.interval, "Tick resample interval (e.g. 1m)");
  ingest_cmd->callback([&] { run_ingest(ingest); });

  VolOpts vol;
  auto* vol_cmd = app.add_subcommand("vol", "Bucketed realized volatility from market data");
  vol_cmd->add_option("--input", vol.input, "Input CSV (\"-\": stdin)");
  vol_cmd->add_option("--out", vol.out, "Volatility CSV (\"-\": stdout)");
  vol_cmd->add_option("--field", vol.field, "OHLC column: open/high/low/close");
  vol_cmd->add_flag("--tick", vol.tick, "Input is tick data");
  vol_cmd->add_flag("--prices", vol.prices, "Input is a timestamp,price CSV");
  vol_cmd->add_flag("--returns", vol.returns, "Input is already a return series");
  vol_cmd->add_option("--interval", vol.interval, "Tick resample interval (e.g. 1m)");
  vol_cmd->add_option("--bucket", vol.bucket, "Bucket duration (e.g. 1h, 1d)");
  vol_cmd->add_option("--bucket-count", vol.bucket_count, "Returns per bucket");
  vol_cmd->callback([&] { run_vol(vol); });

  auto* ssa_cmd = app.add_subcommand("ssa", "Singular spectrum analysis");
  ssa_cmd->require_subcommand(1);

  SsaDecomposeOpts sdec;
  auto* sdec_cmd = ssa_cmd->add_subcommand("decompose", "Eigenvalues and reconstructions");
  sdec_cmd->add_option("--input", sdec.input, "Series CSV (\"-\": stdin)");
  sdec_cmd->add_option("--out", sdec.out, "Eigenvalue CSV (\"-\": stdout)");
  sdec_cmd->add_option("--L", sdec.window_length, "Lagged-vector length")->required();
  sdec_cmd->add_option("--components", sdec.components, "Components to reconstruct");
  sdec_cmd->add_option("--recon-out", sdec.recon_out, "Per-component reconstruction CSV");
  sdec_cmd->callback([&] { run_ssa_decompose(sdec); });

  SsaForecastOpts sfc;
  auto* sfc_cmd = ssa_cmd->add_subcommand("forecast", "Rolling direction labels");
  sfc_cmd->add_option("--input", sfc.input, "Series CSV (\"-\": stdin)");
  sfc_cmd->add_option("--out", sfc.out, "Label CSV (\"-\": stdout)");
  sfc_cmd->add_option("--window", sfc.window, "Rolling window W");
  sfc_cmd->add_option("--L", sfc.window_length, "Lagged-vector length");
  sfc_cmd->add_option("--S", sfc.component, "Trend component index");
  sfc_cmd->add_option("--threads", sfc.threads, "Worker thread cap");
  sfc_cmd->callback([&] { run_ssa_forecast(sfc); });

  auto* lyap_cmd = app.add_subcommand("lyapunov", "Largest-Lyapunov-exponent analysis");
  lyap_cmd->require_subcommand(1);

  LyapunovEstimateOpts lest;
  auto* lest_cmd = lyap_cmd->add_subcommand("estimate", "One estimate with diagnostics");
  lest_cmd->add_option("--input", lest.input, "Series CSV (\"-\": stdin)");
  lest_cmd->add_option("--out", lest.out, "Summary CSV (\"-\": stdout)");
  lest_cmd->add_option("--curve-out", lest.curve_out, "Divergence-curve CSV");
  add_lyapunov_flags(lest_cmd, lest);
  lest_cmd->callback([&] { run_lyapunov_estimate(lest); });

  LyapunovSweepOpts lsw;
  auto* lsw_cmd = lyap_cmd->add_subcommand("sweep", "Estimates over prefix lengths");
  lsw_cmd->add_option("--input", lsw.base.input, "Series CSV (\"-\": stdin)");
  lsw_cmd->add_option("--out", lsw.base.out, "Convergence CSV (\"-\": stdout)");
  add_lyapunov_flags(lsw_cmd, lsw.base);
  lsw_cmd->add_option("--n-from", lsw.n_from, "First prefix length");
  lsw_cmd->add_option("--n-to", lsw.n_to, "Last prefix length");
  lsw_cmd->add_option("--n-step", lsw.n_step, "Prefix grid step");
  lsw_cmd->callback([&] { run_lyapunov_sweep(lsw); });

  auto* garch_cmd = app.add_subcommand("garch", "GARCH volatility modeling");
  garch_cmd->require_subcommand(1);

  GarchFitOpts gfit;
  auto* gfit_cmd = garch_cmd->add_subcommand("fit", "Maximum-likelihood fit");
  gfit_cmd->add_option("--input", gfit.input, "Series CSV (\"-\": stdin)");
  gfit_cmd->add_option("--out", gfit.out, "Parameter JSON (\"-\": stdout)");
  gfit_cmd->add_option("--p", gfit.p, "Variance lags");
  gfit_cmd->add_option("--q", gfit.q, "Squared-residual lags");
  gfit_cmd->add_option("--mean-q", gfit.mean_q, "MA order of the mean model");
  gfit_cmd->callback([&] { run_garch_fit(gfit); });

  GarchForecastOpts gfc;
  auto* gfc_cmd = garch_cmd->add_subcommand("forecast", "Multi-step sigma forecast");
  gfc_cmd->add_option("--input", gfc.base.input, "Series CSV (\"-\": stdin)");
  gfc_cmd->add_option("--out", gfc.base.out, "Forecast CSV (\"-\": stdout)");
  gfc_cmd->add_option("--p", gfc.base.p, "Variance lags");
  gfc_cmd->add_option("--q", gfc.base.q, "Squared-residual lags");
  gfc_cmd->add_option("--mean-q", gfc.base.mean_q, "MA order of the mean model");
  gfc_cmd->add_option("--horizon", gfc.horizon, "Steps ahead");
  gfc_cmd->callback([&] { run_garch_forecast(gfc); });

  BacktestOpts bt;
  auto* bt_cmd = app.add_subcommand("backtest", "Rolling-window direction backtest");
  bt_cmd->add_option("--input", bt.input, "Volatility CSV (\"-\": stdin)");
  bt_cmd->add_option("--out", bt.out, "Report JSON (\"-\": stdout)");
  bt_cmd->add_option("--steps-out", bt.steps_out, "Per-step CSV");
  bt_cmd->add_option("--model", bt.model, "ssa, lyapunov or garch");
  bt_cmd->add_option("--window", bt.window, "Rolling window W");
  bt_cmd->add_option("--horizon", bt.horizon, "Forecast horizon h");
  bt_cmd->add_option("--threads", bt.threads, "Worker thread cap");
  bt_cmd->add_option("--L", bt.window_length, "SSA lagged-vector length");
  bt_cmd->add_option("--S", bt.component, "SSA trend component index");
  bt_cmd->add_option("--dim", bt.dim, "Lyapunov embedding dimension");
  bt_cmd->add_option("--lag", bt.lag, "Lyapunov delay, or \"auto\"");
  bt_cmd->add_option("--theiler", bt.theiler, "Lyapunov exclusion window (-1: dim*lag)");
  bt_cmd->add_option("--max-steps", bt.max_steps, "Lyapunov divergence horizon");
  bt_cmd->add_option("--fit-min", bt.fit_min, "Lyapunov fit start");
  bt_cmd->add_option("--fit-max", bt.fit_max, "Lyapunov fit end");
  bt_cmd->add_option("--p", bt.p, "GARCH variance lags");
  bt_cmd->add_option("--q", bt.q, "GARCH squared-residual lags");
  bt_cmd->add_option("--mean-q", bt.mean_q, "GARCH mean-model MA order");
  bt_cmd->callback([&] { run_backtest(bt); });

  GridSearchOpts gs;
  auto* gs_cmd = app.add_subcommand("gridsearch", "Full SSA parameter grid, horizon 1");
  gs_cmd->add_option("--input", gs.input, "Volatility CSV (\"-\": stdin)");
  gs_cmd->add_option("--out", gs.out, "Grid CSV (\"-\": stdout)");
  gs_cmd->add_option("--best-out", gs.best_out, "Best-cell JSON");
  gs_cmd->add_option("--w-grid", gs.w_grid, "Comma list of W values");
  gs_cmd->add_option("--l-grid", gs.l_grid, "Comma list of L values");
  gs_cmd->add_option("--s-grid", gs.s_grid, "Comma list of S values");
  gs_cmd->add_option("--threads", gs.threads, "Worker thread cap");
  gs_cmd->callback([&] { run_gridsearch(gs); });

  HorizonSweepOpts hs;
  auto* hs_cmd = app.add_subcommand("horizon-sweep", "Metric curve over forecast horizons");
  hs_cmd->add_option("--input", hs.base.input, "Volatility CSV (\"-\": stdin)");
  hs_cmd->add_option("--out", hs.base.out, "Sweep CSV (\"-\": stdout)");
  hs_cmd->add_option("--model", hs.base.model, "ssa, lyapunov or garch");
  hs_cmd->add_option("--window", hs.base.window, "Rolling window W");
  hs_cmd->add_option("--horizons", hs.horizons, "Comma list of horizons");
  hs_cmd->add_option("--threads", hs.base.threads, "Worker thread cap");
  hs_cmd->add_option("--L", hs.base.window_length, "SSA lagged-vector length");
  hs_cmd->add_option("--S", hs.base.component, "SSA trend component index");
  hs_cmd->add_option("--dim", hs.base.dim, "Lyapunov embedding dimension");
  hs_cmd->add_option("--lag", hs.base.lag, "Lyapunov delay, or \"auto\"");
  hs_cmd->add_option("--theiler", hs.base.theiler, "Lyapunov exclusion window (-1: dim*lag)");
  hs_cmd->add_option("--max-steps", hs.base.max_steps, "Lyapunov divergence horizon");
  hs_cmd->add_option("--fit-min", hs.base.fit_min, "Lyapunov fit start");
  hs_cmd->add_option("--fit-max", hs.base.fit_max, "Lyapunov fit end");
  hs_cmd->add_option("--p", hs.base.p, "GARCH variance lags");
  hs_cmd->add_option("--q", hs.base.q, "GARCH squared-residual lags");
  hs_cmd->add_option("--mean-q", hs.base.mean_q, "GARCH mean-model MA order");
  hs_cmd->callback([&] { run_horizon_sweep(hs); });

  MetricsOpts mx;
  auto* mx_cmd = app.add_subcommand("metrics", "Confusion metrics from a steps CSV");
  mx_cmd->add_option("--steps", mx.steps, "Steps CSV (\"-\": stdin)");
  mx_cmd->add_option("--out", mx.out, "Metrics JSON (\"-\": stdout)");
  mx_cmd->callback([&] { run_metrics(mx); });

  auto* synth_cmd = app.add_subcommand("synth", "Deterministic synthetic series");
  synth_cmd->require_subcommand(1);

  SynthLorenzOpts slo;
  auto* slo_cmd = synth_cmd->add_subcommand("lorenz", "Integrated Lorenz trajectory");
  slo_cmd->add_option("--out", slo.out, "Three-column CSV (\"-\": stdout)");
  slo_cmd->add_option("--sigma", slo.params.sigma, "sigma");
  slo_cmd->add_option("--rho", slo.params.rho, "rho");
  slo_cmd->add_option("--beta", slo.params.beta, "beta");
  slo_cmd->add_option("--x0", slo.params.x0, "Initial x");
  slo_cmd->add_option("--y0", slo.params.y0, "Initial y");
  slo_cmd->add_option("--z0", slo.params.z0, "Initial z");
  slo_cmd->add_option("--dt", slo.params.dt, "Integration step");
  slo_cmd->add_option("--discard", slo.params.discard, "Transient steps dropped");
  slo_cmd->add_option("--n", slo.params.n, "Samples to emit")->required();
  slo_cmd->callback([&] { run_synth_lorenz(slo); });

  SynthGarchOpts sga;
  auto* sga_cmd = synth_cmd->add_subcommand("garch", "Simulated GARCH(1,1) returns");
  sga_cmd->add_option("--out", sga.out, "Single-column CSV (\"-\": stdout)");
  sga_cmd->add_option("--omega", sga.params.omega, "omega")->required();
  sga_cmd->add_option("--alpha", sga.params.alpha, "alpha");
  sga_cmd->add_option("--beta", sga.params.beta, "beta");
  sga_cmd->add_option("--n", sga.params.n, "Samples to emit")->required();
  sga_cmd->add_option("--seed", sga.params.seed, "RNG seed")->required();
  sga_cmd->callback([&] { run_synth_garch(sga); });

  SynthHarmonicOpts sha;
  auto* sha_cmd = synth_cmd->add_subcommand("harmonic", "Sinusoids plus Gaussian noise");
  sha_cmd->add_option("--out", sha.out, "Single-column CSV (\"-\": stdout)");
  sha_cmd->add_option("--components", sha.components, "amplitude:period:phase[,...]");
  sha_cmd->add_option("--noise-sigma", sha.noise_sigma, "Noise standard deviation");
  sha_cmd->add_option("--n", sha.n, "Samples to emit")->required();
  sha_cmd->add_option("--seed", sha.seed, "RNG seed")->required();
  sha_cmd->callback([&] { run_synth_harmonic(sha); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const volkit::Error& e) {
    std::cerr << "error[" << e.id() << "]: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
