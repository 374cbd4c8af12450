#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "json.hpp"

#include "hallnet/domain.hpp"

namespace hallnet::metrics {

// All functions take targets A and predictions P of equal, non-zero length
// and throw ValidationError on a length mismatch, empty or non-finite input.

/// (1/N) sum (A - P)^2
double mse(std::span<const double> targets, std::span<const double> predictions);
/// sqrt(mse)
double rmse(std::span<const double> targets, std::span<const double> predictions);
/// (1/N) sum |A - P|
double mae(std::span<const double> targets, std::span<const double> predictions);

/// sqrt(1 - sum (A - P)^2 / sum A^2), evaluated exactly as written. This is
/// not a correlation in the Pearson sense. Throws NumericalError when the
/// radicand is negative or sum A^2 is zero.
double r_paper(std::span<const double> targets, std::span<const double> predictions);

/// Sample Pearson correlation. Throws NumericalError on zero variance.
double r_pearson(std::span<const double> targets, std::span<const double> predictions);

struct EvalReport {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double r_paper = 0.0;
  double r_pearson = 0.0;
  std::size_t n = 0;
};

/// Every metric of the report. r_pearson is NaN (null in JSON) when either
/// vector is constant, since it is undefined there.
EvalReport report(std::span<const double> targets, std::span<const double> predictions);

/// Maps a normalized input vector to a normalized prediction.
using PredictFn = std::function<double(const Features&)>;

/// Predicts every test sample in normalized space, denormalizes, and reports
/// the metrics on the raw °C scale.
EvalReport evaluate(const PredictFn& predict, const Dataset& test, const Normalizer& normalizer);

/// Raw-scale predictions for every sample, in order.
std::vector<double> predict_raw(const PredictFn& predict, const Dataset& data,
                                const Normalizer& normalizer);

nlohmann::ordered_json to_json(const EvalReport& report);

}  // namespace hallnet::metrics
