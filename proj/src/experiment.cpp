#include "hallnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hallnet/csv.hpp"
#include "hallnet/error.hpp"
#include "hallnet/parallel.hpp"
#include "hallnet/random.hpp"

namespace hallnet::experiment {
namespace {

std::string fixed(double x, int decimals = 6) {
  if (!std::isfinite(x)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string label(ModelKind kind) { return kind == ModelKind::kMlp ? "MLP" : "RBF"; }

nlohmann::ordered_json stats_json(const ColumnStats& s) {
  return {{"validation", s.validation}, {"training", s.training}, {"test", s.test}};
}

}  // namespace

int select_best_repetition(std::span<const double> test_performance) {
  if (test_performance.empty()) throw ValidationError("no repetitions to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < test_performance.size(); ++i)
    if (test_performance[i] < test_performance[best]) best = i;
  return static_cast<int>(best) + 1;
}

RepetitionSummary summarize_repetitions(std::span<const RepetitionRow> rows) {
  if (rows.empty()) throw ValidationError("cannot summarize zero repetitions");
  RepetitionSummary s;
  s.minimum = s.maximum = {rows[0].validation, rows[0].training, rows[0].test};
  ColumnStats sum{};
  for (const auto& r : rows) {
    s.minimum.validation = std::min(s.minimum.validation, r.validation);
    s.minimum.training = std::min(s.minimum.training, r.training);
    s.minimum.test = std::min(s.minimum.test, r.test);
    s.maximum.validation = std::max(s.maximum.validation, r.validation);
    s.maximum.training = std::max(s.maximum.training, r.training);
    s.maximum.test = std::max(s.maximum.test, r.test);
    sum.validation += r.validation;
    sum.training += r.training;
    sum.test += r.test;
  }
  const auto n = static_cast<double>(rows.size());
  s.average = {sum.validation / n, sum.training / n, sum.test / n};
  return s;
}

RepetitionResult run_mlp_repetitions(const mlp::MlpTrainConfig& base, const DataSplit& split,
                                     const Normalizer& normalizer, int n_reps, bool parallel) {
  if (n_reps < 1) throw ValidationError("MLP repetitions must be >= 1");
  mlp::validate(base);
  const Batch train = normalize(normalizer, split.train);
  const Batch validation = normalize(normalizer, split.validation);

  std::vector<TrainedModel> models(static_cast<std::size_t>(n_reps));
  std::vector<RepetitionRow> rows(static_cast<std::size_t>(n_reps));
  parallel_for(models.size(), parallel, [&](std::size_t i) {
    const int rep = static_cast<int>(i) + 1;
    mlp::MlpTrainConfig config = base;
    config.seed = base.seed + static_cast<std::uint64_t>(rep);
    mlp::TrainResult trained;
    try {
      trained = mlp::train(config, train, validation);
    } catch (const NumericalError& e) {
      throw NumericalError("repetition " + std::to_string(rep) + ": " + e.what());
    }
    TrainedModel model{std::move(trained.model), normalizer, hallnet::to_json(config)};
    const auto fn = model.predictor();
    rows[i] = {rep, metrics::evaluate(fn, split.validation, normalizer).mse,
               metrics::evaluate(fn, split.train, normalizer).mse,
               metrics::evaluate(fn, split.test, normalizer).mse};
    models[i] = std::move(model);
  });

  std::vector<double> test_perf;
  for (const auto& r : rows) test_perf.push_back(r.test);
  RepetitionResult result;
  result.hidden_count = base.hidden_count;
  result.rows = std::move(rows);
  result.best_index = select_best_repetition(test_perf);
  result.best = std::move(models[static_cast<std::size_t>(result.best_index - 1)]);
  return result;
}

int select_plateau(std::span<const int> grid, std::span<const double> rmse, double tolerance) {
  if (grid.empty() || grid.size() != rmse.size())
    throw ValidationError("plateau selection needs one RMSE per grid point");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (rmse[i] - rmse[i + 1] < tolerance) return grid[i];
  std::size_t best = 0;
  for (std::size_t i = 1; i < rmse.size(); ++i)
    if (rmse[i] < rmse[best]) best = i;
  return grid[best];
}

SweepResult run_rbf_sweep(const rbf::RbfTrainConfig& base, const DataSplit& split,
                          const Normalizer& normalizer, std::span<const int> grid,
                          double plateau_tolerance, bool parallel) {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw ValidationError("sweep grid values must be >= 1");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ValidationError("sweep grid must be strictly increasing");
  }
  if (static_cast<std::size_t>(grid.back()) > split.train.size())
    throw ValidationError("sweep grid maximum " + std::to_string(grid.back()) +
                          " exceeds the training size " + std::to_string(split.train.size()));
  if (!(plateau_tolerance >= 0.0)) throw ValidationError("plateau tolerance must be >= 0");
  if (split.test.empty()) throw ValidationError("sweep needs a non-empty test partition");

  const Batch train = normalize(normalizer, split.train);
  std::vector<TrainedModel> models(grid.size());
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), parallel, [&](std::size_t i) {
    rbf::RbfTrainConfig config = base;
    config.neurons = grid[i];
    config.seed = derive_seed(base.seed, static_cast<std::uint64_t>(grid[i]));
    TrainedModel model{rbf::train(config, train), normalizer, hallnet::to_json(config)};
    const auto report = metrics::evaluate(model.predictor(), split.test, normalizer);
    rows[i] = {grid[i], report.rmse, report.r_paper, report.mae};
    models[i] = std::move(model);
  });

  SweepResult result;
  result.grid.assign(grid.begin(), grid.end());
  result.plateau_tolerance = plateau_tolerance;
  std::vector<double> rmse;
  for (const auto& r : rows) rmse.push_back(r.rmse);
  result.selected_neurons = select_plateau(grid, rmse, plateau_tolerance);
  const auto pos = std::find(grid.begin(), grid.end(), result.selected_neurons) - grid.begin();
  result.selected = std::move(models[static_cast<std::size_t>(pos)]);
  result.rows = std::move(rows);
  return result;
}

ComparisonReport compare(const TrainedModel& first, const TrainedModel& second,
                         const Dataset& test) {
  if (!(first.normalizer == second.normalizer))
    throw MismatchError("models were fitted with different normalizers (" +
                        first.normalizer.fingerprint() + " vs " +
                        second.normalizer.fingerprint() + ")");
  if (test.empty()) throw ValidationError("comparison needs a non-empty test set");
  ComparisonReport report;
  for (const TrainedModel* m : {&first, &second})
    report.rows.push_back(
        {label(m->kind()), metrics::evaluate(m->predictor(), test, m->normalizer)});
  const double a = report.rows[0].metrics.rmse;
  const double b = report.rows[1].metrics.rmse;
  report.winner = a < b ? report.rows[0].label : b < a ? report.rows[1].label : "tie";
  return report;
}

DeviationSeries deviation_series(const TrainedModel& model, const Dataset& test) {
  const auto predictions = metrics::predict_raw(model.predictor(), test, model.normalizer);
  DeviationSeries series;
  series.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double target = test.samples[i].hall_temp;
    series.push_back({i, target, predictions[i], predictions[i] - target});
  }
  return series;
}

nlohmann::ordered_json to_json(const RepetitionResult& result) {
  nlohmann::ordered_json j;
  j["hidden"] = result.hidden_count;
  j["performance"] = "mse";
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows)
    rows.push_back({{"repetition", r.index},
                    {"validation", r.validation},
                    {"training", r.training},
                    {"test", r.test}});
  j["rows"] = std::move(rows);
  const auto s = summarize_repetitions(result.rows);
  j["summary"] = {{"minimum", stats_json(s.minimum)},
                  {"maximum", stats_json(s.maximum)},
                  {"average", stats_json(s.average)}};
  j["best_repetition"] = result.best_index;
  return j;
}

nlohmann::ordered_json to_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["grid"] = result.grid;
  j["plateau_tolerance"] = result.plateau_tolerance;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows)
    rows.push_back({{"neurons", r.neurons}, {"rmse", r.rmse}, {"r_paper", r.r_paper}, {"mae", r.mae}});
  j["rows"] = std::move(rows);
  j["selected_neurons"] = result.selected_neurons;
  return j;
}

nlohmann::ordered_json to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["network"] = r.label;
    row["mae"] = r.metrics.mae;
    row["rmse"] = r.metrics.rmse;
    row["r_paper"] = r.metrics.r_paper;
    row["r_pearson"] = metrics::to_json(r.metrics)["r_pearson"];
    row["mse"] = r.metrics.mse;
    row["n"] = r.metrics.n;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["winner"] = report.winner;
  return j;
}

std::string to_text(const RepetitionResult& result) {
  std::ostringstream out;
  out << "MLP repetitions (performance = MSE, degC^2)\n";
  out << pad("H/rep", 12) << pad("validation", 14) << pad("training", 14) << "test\n";
  for (const auto& r : result.rows)
    out << pad(std::to_string(result.hidden_count) + "/" + std::to_string(r.index), 12)
        << pad(fixed(r.validation), 14) << pad(fixed(r.training), 14) << fixed(r.test) << '\n';
  const auto s = summarize_repetitions(result.rows);
  for (const auto& [name, stats] :
       {std::pair{"Minimum", s.minimum}, {"Maximum", s.maximum}, {"Average", s.average}})
    out << pad(name, 12) << pad(fixed(stats.validation), 14) << pad(fixed(stats.training), 14)
        << fixed(stats.test) << '\n';
  out << "Best repetition: " << result.best_index << '\n';
  return out.str();
}

std::string to_text(const SweepResult& result) {
  std::ostringstream out;
  out << "RBF hidden-neuron sweep (test partition)\n";
  out << pad("neurons", 10) << pad("RMSE", 12) << pad("R", 12) << "MAE\n";
  for (const auto& r : result.rows)
    out << pad(std::to_string(r.neurons), 10) << pad(fixed(r.rmse), 12) << pad(fixed(r.r_paper), 12)
        << fixed(r.mae) << '\n';
  out << "Selected neurons: " << result.selected_neurons << " (plateau tolerance "
      << format_double(result.plateau_tolerance) << " degC)\n";
  return out.str();
}

std::string to_text(const ComparisonReport& report) {
  std::ostringstream out;
  out << pad("Network type", 14) << pad("MAE", 12) << pad("RMSE", 12) << pad("R", 12)
      << "R (Pearson)\n";
  for (const auto& r : report.rows)
    out << pad(r.label, 14) << pad(fixed(r.metrics.mae), 12) << pad(fixed(r.metrics.rmse), 12)
        << pad(fixed(r.metrics.r_paper), 12) << fixed(r.metrics.r_pearson) << '\n';
  out << "Winner: " << report.winner << '\n';
  return out.str();
}

std::string to_csv(const DeviationSeries& series) {
  std::ostringstream out;
  out << "index,target,prediction,deviation\n";
  for (const auto& p : series)
    out << p.index << ',' << format_double(p.target) << ',' << format_double(p.prediction) << ','
        << format_double(p.deviation) << '\n';
  return out.str();
}

}  // namespace hallnet::experiment
