#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/labels.hpp"
#include "volkit/marketdata.hpp"

namespace volkit::evaluate {

/// 2x2 tally with class I (increase) as the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  void add(ClassLabel predicted, ClassLabel actual);
  std::int64_t total() const { return tp + fp + tn + fn; }
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn),
/// f1 = 2pr/(p+r). Degenerate denominators resolve to 0 so the function is
/// total on any non-empty matrix; an empty matrix is an error.
Metrics metrics(const ConfusionMatrix& confusion);

/// label[i] classifies the move sigma[i] -> sigma[i+1]: up -> class I,
/// down or unchanged -> class II. Requires length >= 2.
std::vector<ClassLabel> label_direction(std::span<const double> sigmas);
std::vector<ClassLabel> label_direction(const marketdata::VolatilitySeries& sigmas);

/// A direction model under test. predict receives exactly the trailing
/// window of past volatilities and nothing else, which is what makes the
/// backtest leak-proof by construction. Implementations must be safe to
/// call concurrently on distinct windows.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string id() const = 0;
  virtual ClassLabel predict(std::span<const double> window) const = 0;
};

/// One evaluated backtest step. `step` is the index i of the first bucket
/// after the window; the prediction concerns sigma[i+h-1] vs sigma[i-1]
/// and timestamp is the start of that target bucket i+h-1.
struct StepRecord {
  std::int64_t step = 0;
  timeutil::EpochMs timestamp = 0;
  ClassLabel predicted = ClassLabel::decrease;
  ClassLabel actual = ClassLabel::decrease;
};

/// A step the model refused (threw a volkit error); reason is the error id.
struct SkippedStep {
  std::int64_t step = 0;
  std::string reason;
};

struct BacktestReport {
  std::string model_id;
  int window = 0;
  int horizon = 0;
  ConfusionMatrix confusion;
  Metrics scores;
  std::vector<StepRecord> steps;    // sorted by step index
  std::vector<SkippedStep> skipped;  // sorted by step index
};

/// Walks i = W .. N-h. At each step the model sees sigmas[i-W, i) only;
/// its label is scored against the realized comparison of sigma[i+h-1]
/// with sigma[i-1]. Steps run on up to `threads` workers; records are
/// assembled by index, so the report is identical at any thread count.
/// Requires N > W + h; errors if every step was skipped.
BacktestReport rolling_backtest(const marketdata::VolatilitySeries& sigmas,
                                const Forecaster& model, int window, int horizon,
                                unsigned threads = 1);

/// One cell of the SSA parameter grid. status is "ok" or the error id
/// that made the cell inadmissible (metrics are NaN in that case).
struct GridRow {
  int window = 0;     // W
  int length = 0;     // L
  int component = 0;  // S
  double accuracy = 0.0;
  double f1 = 0.0;
  std::int64_t n_evaluated = 0;
  std::string status;
};

struct GridResult {
  std::vector<GridRow> rows;               // lexicographic by (W, L, S)
  std::optional<std::size_t> best_index;   // absent when no cell is admissible
};

/// True when `a` beats `b`: higher accuracy, then higher f1, then smaller
/// W, then smaller L, then smaller S.
bool grid_row_better(const GridRow& a, const GridRow& b);

/// Full factorial horizon-1 backtest over the sorted, deduplicated grids.
/// Cells run on up to `threads` workers, each backtest single-threaded.
GridResult ssa_grid_search(const marketdata::VolatilitySeries& sigmas,
                           std::vector<int> w_grid, std::vector<int> l_grid,
                           std::vector<int> s_grid, unsigned threads = 1);

/// One horizon of a sweep; status as in GridRow.
struct HorizonRow {
  int horizon = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  std::int64_t n_evaluated = 0;
  std::string status;
};

/// One rolling backtest per horizon (sorted ascending, deduplicated) with
/// a shared window. Per-horizon failures are recorded, not thrown.
std::vector<HorizonRow> horizon_sweep(const marketdata::VolatilitySeries& sigmas,
                                      const Forecaster& model, int window,
                                      std::vector<int> horizons, unsigned threads = 1);

/// Report JSON: config echo, step counts, confusion matrix, four metrics.
void write_report_json(std::ostream& out, const BacktestReport& report);

/// CSV `step,timestamp,predicted,actual` with I/II labels.
void write_steps_csv(std::ostream& out, const BacktestReport& report);

/// CSV `W,L,S,accuracy,f1,n_evaluated,status`; metric cells are empty on
/// error rows.
void write_grid_csv(std::ostream& out, const GridResult& result);

/// CSV `horizon,accuracy,f1,n_evaluated,status`.
void write_horizon_csv(std::ostream& out, const std::vector<HorizonRow>& rows);

}  // namespace volkit::evaluate
