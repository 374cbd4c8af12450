#include "hallnet/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hallnet/error.hpp"

namespace hallnet::metrics {
namespace {

void check(std::span<const double> a, std::span<const double> p) {
  if (a.size() != p.size())
    throw ValidationError("metric inputs differ in length (" + std::to_string(a.size()) + " vs " +
                          std::to_string(p.size()) + ")");
  if (a.empty()) throw ValidationError("metric inputs are empty");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i]) || !std::isfinite(p[i]))
      throw ValidationError("metric inputs must be finite");
}

double sum_squared_residual(std::span<const double> a, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - p[i]) * (a[i] - p[i]);
  return s;
}

}  // namespace

double mse(std::span<const double> a, std::span<const double> p) {
  check(a, p);
  return sum_squared_residual(a, p) / static_cast<double>(a.size());
}

double rmse(std::span<const double> a, std::span<const double> p) { return std::sqrt(mse(a, p)); }

double mae(std::span<const double> a, std::span<const double> p) {
  check(a, p);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - p[i]);
  return s / static_cast<double>(a.size());
}

double r_paper(std::span<const double> a, std::span<const double> p) {
  check(a, p);
  double sum_sq_target = 0.0;
  for (double x : a) sum_sq_target += x * x;
  if (sum_sq_target == 0.0) throw NumericalError("r_paper undefined: sum of squared targets is 0");
  const double radicand = 1.0 - sum_squared_residual(a, p) / sum_sq_target;
  if (radicand < 0.0) throw NumericalError("r_paper undefined for this input (negative radicand)");
  return std::sqrt(radicand);
}

double r_pearson(std::span<const double> a, std::span<const double> p) {
  check(a, p);
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_p = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_p += p[i];
  }
  mean_a /= n;
  mean_p /= n;
  double cov = 0.0, var_a = 0.0, var_p = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double dp = p[i] - mean_p;
    cov += da * dp;
    var_a += da * da;
    var_p += dp * dp;
  }
  if (var_a == 0.0 || var_p == 0.0)
    throw NumericalError("Pearson correlation undefined for a zero-variance input");
  return cov / std::sqrt(var_a * var_p);
}

EvalReport report(std::span<const double> a, std::span<const double> p) {
  EvalReport r;
  r.mse = mse(a, p);
  r.rmse = std::sqrt(r.mse);
  r.mae = mae(a, p);
  r.r_paper = r_paper(a, p);
  try {
    r.r_pearson = r_pearson(a, p);
  } catch (const NumericalError&) {
    r.r_pearson = std::numeric_limits<double>::quiet_NaN();
  }
  r.n = a.size();
  return r;
}

std::vector<double> predict_raw(const PredictFn& predict, const Dataset& data,
                                const Normalizer& normalizer) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& s : data.samples)
    out.push_back(normalizer.invert_target(predict(normalizer.apply_inputs(s))));
  return out;
}

EvalReport evaluate(const PredictFn& predict, const Dataset& test, const Normalizer& normalizer) {
  if (test.empty()) throw ValidationError("cannot evaluate on an empty dataset");
  const auto targets = test.targets();
  const auto predictions = predict_raw(predict, test, normalizer);
  return report(targets, predictions);
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["mse"] = r.mse;
  j["rmse"] = r.rmse;
  j["mae"] = r.mae;
  j["r_paper"] = r.r_paper;
  if (std::isfinite(r.r_pearson))
    j["r_pearson"] = r.r_pearson;
  else
    j["r_pearson"] = nullptr;
  j["n"] = r.n;
  return j;
}

}  // namespace hallnet::metrics
