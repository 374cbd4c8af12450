#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "hallnet/domain.hpp"
#include "hallnet/metrics.hpp"
#include "hallnet/mlp.hpp"
#include "hallnet/rbf.hpp"

namespace hallnet {

inline constexpr int kModelSchemaVersion = 1;

enum class ModelKind { kMlp, kRbf };

std::string to_string(ModelKind kind);
/// Accepts "mlp" or "rbf"; anything else is a ValidationError.
ModelKind parse_model_kind(const std::string& text);

/// A trained network together with the normalizer it was fitted with and the
/// configuration that produced it.
struct TrainedModel {
  std::variant<mlp::MlpModel, rbf::RbfModel> network;
  Normalizer normalizer;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  ModelKind kind() const;
  /// Normalized input -> normalized output.
  double predict_normalized(const Features& x) const;
  /// Raw °C inputs -> raw °C prediction.
  double predict(const Features& raw) const;
  metrics::PredictFn predictor() const;
};

nlohmann::ordered_json to_json(const mlp::MlpTrainConfig& config);
nlohmann::ordered_json to_json(const rbf::RbfTrainConfig& config);
nlohmann::ordered_json to_json(const Normalizer& normalizer);
Normalizer normalizer_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const TrainedModel& model);
/// Throws ValidationError on schema problems.
TrainedModel model_from_json(const nlohmann::ordered_json& j);

/// Output is deterministic: identical models give identical bytes.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

/// Writes `doc` pretty-printed with a trailing newline.
void write_json_file(const nlohmann::ordered_json& doc, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace hallnet
