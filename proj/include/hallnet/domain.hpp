#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hallnet {

inline constexpr std::size_t kInputCount = 5;
inline constexpr std::size_t kFeatureCount = kInputCount + 1;

/// Column order used everywhere: CSV files, normalizer arrays, model inputs.
enum class Feature : std::size_t {
  kAmbientTemp = 0,
  kWaterTemp,
  kFreshDamper,
  kCircDamper,
  kWaterTap,
  kHallTemp,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "ambient_temp", "water_temp", "fresh_damper", "circ_damper", "water_tap", "hall_temp"};

inline std::string_view feature_name(Feature f) {
  return kFeatureNames[static_cast<std::size_t>(f)];
}

/// Model input vector in column order (ambient, water, fresh, circ, tap).
using Features = std::array<double, kInputCount>;

/// One observation of the growing hall. Temperatures in degrees C, actuator
/// openings as fractions in [0, 1].
struct Sample {
  double ambient_temp = 0.0;
  double water_temp = 0.0;
  double fresh_damper = 0.0;
  double circ_damper = 0.0;
  double water_tap = 0.0;
  double hall_temp = 0.0;

  Features inputs() const {
    return {ambient_temp, water_temp, fresh_damper, circ_damper, water_tap};
  }
  double value(Feature f) const;
  std::array<double, kFeatureCount> values() const {
    return {ambient_temp, water_temp, fresh_damper, circ_damper, water_tap, hall_temp};
  }

  static Sample from_values(const std::array<double, kFeatureCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  bool operator==(const Sample&) const = default;
};

/// Throws ValidationError naming the offending field.
void validate(const Sample& sample);

struct SyntheticSource {
  std::uint64_t seed = 0;
  bool operator==(const SyntheticSource&) const = default;
};
struct FileSource {
  std::string path;
  bool operator==(const FileSource&) const = default;
};
using Provenance = std::variant<SyntheticSource, FileSource>;

struct Dataset {
  std::vector<Sample> samples;
  Provenance provenance = SyntheticSource{};

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::vector<double> targets() const;
};

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct DataSplit {
  Dataset train;
  Dataset validation;
  Dataset test;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  /// Source indices of each part, in partition order.
  std::vector<std::size_t> train_index, validation_index, test_index;
};

/// Seeded Fisher-Yates over indices followed by a contiguous partition.
DataSplit split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed);

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
  bool operator==(const Interval&) const = default;
};

/// Per-feature min-max scaling onto a target interval.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::array<double, kFeatureCount> min, std::array<double, kFeatureCount> max,
             Interval range);

  /// Extrema come from `train` only.
  static Normalizer fit(const Dataset& train, Interval range = {});

  double apply(Feature f, double raw) const;
  double invert(Feature f, double scaled) const;

  Features apply_inputs(const Features& raw) const;
  Features apply_inputs(const Sample& s) const { return apply_inputs(s.inputs()); }
  double apply_target(double raw) const { return apply(Feature::kHallTemp, raw); }
  double invert_target(double scaled) const { return invert(Feature::kHallTemp, scaled); }
  Sample apply(const Sample& s) const;

  const std::array<double, kFeatureCount>& min() const { return min_; }
  const std::array<double, kFeatureCount>& max() const { return max_; }
  const Interval& range() const { return range_; }

  /// Hex digest of the exact bit patterns of all stored values.
  std::string fingerprint() const;

  bool operator==(const Normalizer&) const = default;

 private:
  std::array<double, kFeatureCount> min_{};
  std::array<double, kFeatureCount> max_{};
  Interval range_{};
};

/// Normalized design matrix rows and targets, ready for training.
struct Batch {
  std::vector<Features> inputs;
  std::vector<double> targets;

  std::size_t size() const { return inputs.size(); }
  bool empty() const { return inputs.empty(); }
};

Batch normalize(const Normalizer& normalizer, const Dataset& dataset);

}  // namespace hallnet
