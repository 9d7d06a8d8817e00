#include "volkit/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "volkit/csvio.hpp"
#include "volkit/errors.hpp"
#include "volkit/forecasters.hpp"
#include "volkit/parallel.hpp"
#include "volkit/ssa.hpp"

namespace volkit::evaluate {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

void ConfusionMatrix::add(ClassLabel predicted, ClassLabel actual) {
  if (predicted == ClassLabel::increase) {
    actual == ClassLabel::increase ? ++tp : ++fp;
  } else {
    actual == ClassLabel::decrease ? ++tn : ++fn;
  }
}

Metrics metrics(const ConfusionMatrix& confusion) {
  const std::int64_t total = confusion.total();
  if (total < 1) fail("bad-config", "confusion matrix is empty");
  Metrics m;
  m.accuracy = static_cast<double>(confusion.tp + confusion.tn) / static_cast<double>(total);
  const std::int64_t predicted_pos = confusion.tp + confusion.fp;
  const std::int64_t actual_pos = confusion.tp + confusion.fn;
  m.precision = predicted_pos > 0
                    ? static_cast<double>(confusion.tp) / static_cast<double>(predicted_pos)
                    : 0.0;
  m.recall = actual_pos > 0
                 ? static_cast<double>(confusion.tp) / static_cast<double>(actual_pos)
                 : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

std::vector<ClassLabel> label_direction(std::span<const double> sigmas) {
  if (sigmas.size() < 2) fail("series-too-short", "need at least 2 sigmas to label");
  std::vector<ClassLabel> out;
  out.reserve(sigmas.size() - 1);
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i) {
    out.push_back(sigmas[i + 1] > sigmas[i] ? ClassLabel::increase : ClassLabel::decrease);
  }
  return out;
}

std::vector<ClassLabel> label_direction(const marketdata::VolatilitySeries& sigmas) {
  return label_direction(std::span<const double>(sigmas.sigmas));
}

BacktestReport rolling_backtest(const marketdata::VolatilitySeries& sigmas,
                                const Forecaster& model, int window, int horizon,
                                unsigned threads) {
  if (window < 1) fail("bad-config", "window must be >= 1");
  if (horizon < 1) fail("bad-config", "horizon must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(sigmas.size());
  if (n <= static_cast<std::int64_t>(window) + horizon) {
    fail("series-too-short", "need more than window + horizon = " +
                                 std::to_string(window + horizon) + " sigmas, got " +
                                 std::to_string(n));
  }

  const std::span<const double> values(sigmas.sigmas);
  const std::int64_t first = window;
  const std::int64_t last = n - horizon;  // inclusive
  const std::size_t n_steps = static_cast<std::size_t>(last - first + 1);

  struct Outcome {
    bool ok = false;
    ClassLabel predicted = ClassLabel::decrease;
    std::string reason;
  };
  std::vector<Outcome> outcomes(n_steps);
  parallel_for(n_steps, threads, [&](std::size_t s) {
    const std::int64_t i = first + static_cast<std::int64_t>(s);
    const auto slice = values.subspan(static_cast<std::size_t>(i - window),
                                      static_cast<std::size_t>(window));
    try {
      outcomes[s] = {true, model.predict(slice), {}};
    } catch (const Error& e) {
      outcomes[s] = {false, ClassLabel::decrease, e.id()};
    }
  });

  BacktestReport report;
  report.model_id = model.id();
  report.window = window;
  report.horizon = horizon;
  for (std::size_t s = 0; s < n_steps; ++s) {
    const std::int64_t i = first + static_cast<std::int64_t>(s);
    if (!outcomes[s].ok) {
      report.skipped.push_back({i, std::move(outcomes[s].reason)});
      continue;
    }
    const std::size_t target = static_cast<std::size_t>(i + horizon - 1);
    const ClassLabel actual = values[target] > values[static_cast<std::size_t>(i - 1)]
                                  ? ClassLabel::increase
                                  : ClassLabel::decrease;
    report.confusion.add(outcomes[s].predicted, actual);
    report.steps.push_back({i, sigmas.bucket_starts[target], outcomes[s].predicted, actual});
  }
  if (report.confusion.total() == 0) {
    fail("degenerate-input",
         "every backtest step was skipped (first reason: " + report.skipped.front().reason + ")");
  }
  report.scores = metrics(report.confusion);
  return report;
}

bool grid_row_better(const GridRow& a, const GridRow& b) {
  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
  if (a.f1 != b.f1) return a.f1 > b.f1;
  if (a.window != b.window) return a.window < b.window;
  if (a.length != b.length) return a.length < b.length;
  return a.component < b.component;
}

GridResult ssa_grid_search(const marketdata::VolatilitySeries& sigmas, std::vector<int> w_grid,
                           std::vector<int> l_grid, std::vector<int> s_grid, unsigned threads) {
  auto canon = [](std::vector<int>& g, const char* name) {
    if (g.empty()) fail("bad-grid", std::string(name) + " grid is empty");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  };
  canon(w_grid, "W");
  canon(l_grid, "L");
  canon(s_grid, "S");

  GridResult result;
  for (int w : w_grid) {
    for (int l : l_grid) {
      for (int s : s_grid) {
        GridRow row;
        row.window = w;
        row.length = l;
        row.component = s;
        row.accuracy = kNan;
        row.f1 = kNan;
        result.rows.push_back(row);
      }
    }
  }

  parallel_for(result.rows.size(), threads, [&](std::size_t idx) {
    GridRow& row = result.rows[idx];
    try {
      const ssa::SsaConfig config{row.length, row.window, row.component};
      config.validate();
      const SsaForecaster model(config);
      const BacktestReport report = rolling_backtest(sigmas, model, row.window, 1, 1);
      row.accuracy = report.scores.accuracy;
      row.f1 = report.scores.f1;
      row.n_evaluated = report.confusion.total();
      row.status = "ok";
    } catch (const Error& e) {
      row.status = e.id();
    }
  });

  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.rows[i].status != "ok") continue;
    if (!result.best_index || grid_row_better(result.rows[i], result.rows[*result.best_index])) {
      result.best_index = i;
    }
  }
  return result;
}

std::vector<HorizonRow> horizon_sweep(const marketdata::VolatilitySeries& sigmas,
                                      const Forecaster& model, int window,
                                      std::vector<int> horizons, unsigned threads) {
  if (horizons.empty()) fail("bad-grid", "horizon grid is empty");
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());

  std::vector<HorizonRow> rows(horizons.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    HorizonRow& row = rows[idx];
    row.horizon = horizons[idx];
    row.accuracy = kNan;
    row.f1 = kNan;
    try {
      const BacktestReport report = rolling_backtest(sigmas, model, window, row.horizon, 1);
      row.accuracy = report.scores.accuracy;
      row.f1 = report.scores.f1;
      row.n_evaluated = report.confusion.total();
      row.status = "ok";
    } catch (const Error& e) {
      row.status = e.id();
    }
  });
  return rows;
}

void write_report_json(std::ostream& out, const BacktestReport& report) {
  nlohmann::ordered_json doc;
  doc["model"] = report.model_id;
  doc["window"] = report.window;
  doc["horizon"] = report.horizon;
  doc["evaluated_steps"] = report.confusion.total();
  doc["skipped_steps"] = static_cast<std::int64_t>(report.skipped.size());
  doc["confusion"] = {{"tp", report.confusion.tp},
                      {"fp", report.confusion.fp},
                      {"tn", report.confusion.tn},
                      {"fn", report.confusion.fn}};
  doc["accuracy"] = report.scores.accuracy;
  doc["precision"] = report.scores.precision;
  doc["recall"] = report.scores.recall;
  doc["f1"] = report.scores.f1;
  out << doc.dump(2) << '\n';
  if (!out) fail("io-error", "failed writing report JSON");
}

void write_steps_csv(std::ostream& out, const BacktestReport& report) {
  out << "step,timestamp,predicted,actual\n";
  for (const StepRecord& rec : report.steps) {
    out << rec.step << ',' << timeutil::format_iso8601_utc(rec.timestamp) << ','
        << to_string(rec.predicted) << ',' << to_string(rec.actual) << '\n';
  }
  if (!out) fail("io-error", "failed writing steps CSV");
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "W,L,S,accuracy,f1,n_evaluated,status\n";
  for (const GridRow& row : result.rows) {
    out << row.window << ',' << row.length << ',' << row.component << ',';
    if (row.status == "ok") {
      out << csv::format_double(row.accuracy) << ',' << csv::format_double(row.f1);
    } else {
      out << ',';
    }
    out << ',' << row.n_evaluated << ',' << row.status << '\n';
  }
  if (!out) fail("io-error", "failed writing grid CSV");
}

void write_horizon_csv(std::ostream& out, const std::vector<HorizonRow>& rows) {
  out << "horizon,accuracy,f1,n_evaluated,status\n";
  for (const HorizonRow& row : rows) {
    out << row.horizon << ',';
    if (row.status == "ok") {
      out << csv::format_double(row.accuracy) << ',' << csv::format_double(row.f1);
    } else {
      out << ',';
    }
    out << ',' << row.n_evaluated << ',' << row.status << '\n';
  }
  if (!out) fail("io-error", "failed writing horizon CSV");
}

}  // namespace volkit::evaluate
