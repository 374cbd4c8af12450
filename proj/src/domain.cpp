#include "hallnet/domain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "hallnet/error.hpp"
#include "hallnet/random.hpp"

namespace hallnet {

double Sample::value(Feature f) const { return values()[static_cast<std::size_t>(f)]; }

void validate(const Sample& sample) {
  const auto v = sample.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i]))
      throw ValidationError(std::string(kFeatureNames[i]) + " is not finite");
  }
  for (Feature f : {Feature::kFreshDamper, Feature::kCircDamper, Feature::kWaterTap}) {
    const double x = sample.value(f);
    if (x < 0.0 || x > 1.0)
      throw ValidationError(std::string(feature_name(f)) + " must lie in [0, 1], got " +
                            std::to_string(x));
  }
}

std::vector<double> Dataset::targets() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.hall_temp);
  return out;
}

DataSplit split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n == 0) throw ValidationError("cannot split an empty dataset");
  if (n < 10)
    throw ValidationError("splitting needs at least 10 samples, got " + std::to_string(n));
  for (double r : {ratios.train, ratios.validation, ratios.test}) {
    if (!std::isfinite(r) || r < 0.0)
      throw ValidationError("split ratios must be finite and non-negative");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
    throw ValidationError("split ratios must sum to 1");

  auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
  auto n_val = static_cast<std::size_t>(std::llround(ratios.validation * static_cast<double>(n)));
  n_train = std::min(n_train, n);
  n_val = std::min(n_val, n - n_train);
  std::size_t n_test = n - n_train - n_val;
  if (ratios.test == 0.0 && n_test > 0) {
    n_train += n_test;
    n_test = 0;
  }
  const std::array<std::pair<double, std::size_t>, 3> parts = {
      std::pair{ratios.train, n_train}, {ratios.validation, n_val}, {ratios.test, n_test}};
  const char* names[] = {"train", "validation", "test"};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].first > 0.0 && parts[i].second == 0)
      throw ValidationError(std::string(names[i]) + " partition would receive 0 samples");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  DataSplit out;
  out.ratios = ratios;
  out.seed = seed;
  auto take = [&](std::size_t begin, std::size_t count, Dataset& part,
                  std::vector<std::size_t>& index) {
    part.provenance = dataset.provenance;
    index.assign(order.begin() + begin, order.begin() + begin + count);
    part.samples.reserve(count);
    for (std::size_t i : index) part.samples.push_back(dataset.samples[i]);
  };
  take(0, n_train, out.train, out.train_index);
  take(n_train, n_val, out.validation, out.validation_index);
  take(n_train + n_val, n_test, out.test, out.test_index);
  return out;
}

Normalizer::Normalizer(std::array<double, kFeatureCount> min, std::array<double, kFeatureCount> max,
                       Interval range)
    : min_(min), max_(max), range_(range) {
  if (!(range_.hi > range_.lo) || !std::isfinite(range_.lo) || !std::isfinite(range_.hi))
    throw ValidationError("normalizer target range must satisfy lo < hi");
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(min_[i]) || !std::isfinite(max_[i]))
      throw ValidationError(std::string("non-finite extrema for feature ") +
                            std::string(kFeatureNames[i]));
    if (!(max_[i] > min_[i]))
      throw ValidationError(std::string("feature ") + std::string(kFeatureNames[i]) +
                            " is constant in the training data");
  }
}

Normalizer Normalizer::fit(const Dataset& train, Interval range) {
  if (train.empty()) throw ValidationError("cannot fit a normalizer on an empty dataset");
  auto lo = train.samples.front().values();
  auto hi = lo;
  for (const auto& s : train.samples) {
    const auto v = s.values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  return Normalizer(lo, hi, range);
}

double Normalizer::apply(Feature f, double raw) const {
  const auto i = static_cast<std::size_t>(f);
  return range_.lo + (raw - min_[i]) * (range_.hi - range_.lo) / (max_[i] - min_[i]);
}

double Normalizer::invert(Feature f, double scaled) const {
  const auto i = static_cast<std::size_t>(f);
  return min_[i] + (scaled - range_.lo) * (max_[i] - min_[i]) / (range_.hi - range_.lo);
}

Features Normalizer::apply_inputs(const Features& raw) const {
  Features out{};
  for (std::size_t i = 0; i < kInputCount; ++i) out[i] = apply(static_cast<Feature>(i), raw[i]);
  return out;
}

Sample Normalizer::apply(const Sample& s) const {
  auto v = s.values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = apply(static_cast<Feature>(i), v[i]);
  return Sample::from_values(v);
}

std::string Normalizer::fingerprint() const {
  // FNV-1a over the raw bit patterns.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (double x : min_) mix(x);
  for (double x : max_) mix(x);
  mix(range_.lo);
  mix(range_.hi);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Batch normalize(const Normalizer& normalizer, const Dataset& dataset) {
  Batch batch;
  batch.inputs.reserve(dataset.size());
  batch.targets.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    batch.inputs.push_back(normalizer.apply_inputs(s));
    batch.targets.push_back(normalizer.apply_target(s.hall_temp));
  }
  return batch;
}

}  // namespace hallnet
