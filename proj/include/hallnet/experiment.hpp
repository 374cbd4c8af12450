#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hallnet/domain.hpp"
#include "hallnet/metrics.hpp"
#include "hallnet/mlp.hpp"
#include "hallnet/model_io.hpp"
#include "hallnet/rbf.hpp"

namespace hallnet::experiment {

/// Performance (MSE on the raw °C scale) of one MLP training repetition.
struct RepetitionRow {
  int index = 0;  // 1-based
  double validation = 0.0;
  double training = 0.0;
  double test = 0.0;
};

struct ColumnStats {
  double validation = 0.0;
  double training = 0.0;
  double test = 0.0;
};

struct RepetitionSummary {
  ColumnStats minimum;
  ColumnStats maximum;
  ColumnStats average;
};

struct RepetitionResult {
  int hidden_count = 0;
  std::vector<RepetitionRow> rows;
  int best_index = 0;  // 1-based
  TrainedModel best;
};

/// 1-based index of the lowest test performance; ties go to the lowest index.
int select_best_repetition(std::span<const double> test_performance);

/// Column-wise min, max and mean. Throws ValidationError on empty input.
RepetitionSummary summarize_repetitions(std::span<const RepetitionRow> rows);

/// Trains n_reps MLPs that differ only in seed (base seed + repetition index)
/// and keeps the one with the lowest test MSE.
RepetitionResult run_mlp_repetitions(const mlp::MlpTrainConfig& base, const DataSplit& split,
                                     const Normalizer& normalizer, int n_reps,
                                     bool parallel = false);

/// Test-partition metrics of the RBF network with `neurons` hidden units.
struct SweepRow {
  int neurons = 0;
  double rmse = 0.0;
  double r_paper = 0.0;
  double mae = 0.0;
};

inline constexpr double kDefaultPlateauTolerance = 1e-3;

/// Smallest grid point whose successor improves RMSE by less than `tolerance`
/// (absolute). Without such a point, the argmin with smallest-K tie-break.
int select_plateau(std::span<const int> grid, std::span<const double> rmse, double tolerance);

struct SweepResult {
  std::vector<int> grid;
  double plateau_tolerance = kDefaultPlateauTolerance;
  std::vector<SweepRow> rows;
  int selected_neurons = 0;
  TrainedModel selected;
};

/// Trains and test-evaluates one RBF network per grid point. Each network is
/// seeded from (base seed, neuron count), so a row does not depend on the
/// other grid points.
SweepResult run_rbf_sweep(const rbf::RbfTrainConfig& base, const DataSplit& split,
                          const Normalizer& normalizer, std::span<const int> grid,
                          double plateau_tolerance = kDefaultPlateauTolerance,
                          bool parallel = false);

struct ComparisonRow {
  std::string label;  // "MLP" or "RBF"
  metrics::EvalReport metrics;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // argument order
  std::string winner;               // label of the lower test RMSE, or "tie"
};

/// Evaluates both models on the same test data. Throws MismatchError when
/// they were fitted with different normalizers.
ComparisonReport compare(const TrainedModel& first, const TrainedModel& second,
                         const Dataset& test);

struct DeviationPoint {
  std::size_t index = 0;
  double target = 0.0;
  double prediction = 0.0;
  double deviation = 0.0;  // prediction - target, °C
};

using DeviationSeries = std::vector<DeviationPoint>;

DeviationSeries deviation_series(const TrainedModel& model, const Dataset& test);

nlohmann::ordered_json to_json(const RepetitionResult& result);
nlohmann::ordered_json to_json(const SweepResult& result);
nlohmann::ordered_json to_json(const ComparisonReport& report);

std::string to_text(const RepetitionResult& result);
std::string to_text(const SweepResult& result);
std::string to_text(const ComparisonReport& report);
/// `index,target,prediction,deviation` with a header line.
std::string to_csv(const DeviationSeries& series);

}  // namespace hallnet::experiment
