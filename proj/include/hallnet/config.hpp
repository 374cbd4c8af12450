#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hallnet/domain.hpp"
#include "hallnet/mlp.hpp"
#include "hallnet/model_io.hpp"
#include "hallnet/rbf.hpp"
#include "hallnet/simulator.hpp"

namespace hallnet {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a batch run needs. Every block is optional in the JSON file and
/// falls back to the defaults below; unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed = 2024;
  bool parallel = false;

  sim::TreatmentDesign design;
  sim::HallParams hall;

  SplitRatios split;
  Interval normalization_range;

  mlp::MlpTrainConfig mlp;
  rbf::RbfTrainConfig rbf;
  ModelKind train_kind = ModelKind::kRbf;

  std::vector<int> sweep_grid{4, 8, 12, 16, 20, 24};
  double plateau_tolerance = 1e-3;
  int mlp_repetitions = 3;

  struct Paths {
    std::optional<std::string> data;
    std::optional<std::string> out;
    std::optional<std::string> model;
  } io;

  // Subsystem seeds, all derived from `seed`.
  std::uint64_t simulate_seed() const;
  std::uint64_t split_seed() const;
  std::uint64_t mlp_seed() const;
  std::uint64_t rbf_seed() const;

  /// Training configs with their derived seeds filled in.
  mlp::MlpTrainConfig mlp_config() const;
  rbf::RbfTrainConfig rbf_config() const;
};

/// Strict validation: wrong types, out-of-range values and unknown keys raise
/// ValidationError naming the dotted key path (e.g. "mlp.learning_rate").
RunConfig parse_config(const nlohmann::ordered_json& doc);

/// Reads and parses a config file. A missing file is an IoError.
RunConfig load_config(const std::string& path);

}  // namespace hallnet
