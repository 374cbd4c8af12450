#include "hallnet/model_io.hpp"

#include <fstream>
#include <sstream>

#include "hallnet/error.hpp"

namespace hallnet {
namespace {

using json = nlohmann::ordered_json;
using nlohmann::ordered_json;

template <typename T>
T get(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string(where) + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(where) + ": key '" + key + "' has the wrong type");
  }
}

std::vector<double> to_vector(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

Eigen::MatrixXd to_matrix(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols,
                          const char* what) {
  if (static_cast<Eigen::Index>(v.size()) != rows * cols)
    throw ValidationError(std::string("model file: ") + what + " has " + std::to_string(v.size()) +
                          " values, expected " + std::to_string(rows * cols));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  return m;
}

Eigen::VectorXd to_column(const std::vector<double>& v, Eigen::Index size, const char* what) {
  return to_matrix(v, size, 1, what);
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string to_string(ModelKind kind) { return kind == ModelKind::kMlp ? "mlp" : "rbf"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "mlp") return ModelKind::kMlp;
  if (text == "rbf") return ModelKind::kRbf;
  throw ValidationError("unknown model kind '" + text + "' (expected mlp or rbf)");
}

ModelKind TrainedModel::kind() const {
  return std::holds_alternative<mlp::MlpModel>(network) ? ModelKind::kMlp : ModelKind::kRbf;
}

double TrainedModel::predict_normalized(const Features& x) const {
  return std::visit(
      [&](const auto& net) -> double {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, mlp::MlpModel>)
          return mlp::forward(net, x);
        else
          return rbf::predict(net, x);
      },
      network);
}

double TrainedModel::predict(const Features& raw) const {
  return normalizer.invert_target(predict_normalized(normalizer.apply_inputs(raw)));
}

metrics::PredictFn TrainedModel::predictor() const {
  return [this](const Features& x) { return predict_normalized(x); };
}

ordered_json to_json(const mlp::MlpTrainConfig& c) {
  return {{"hidden", c.hidden_count},     {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},       {"max_epochs", c.max_epochs},
          {"patience", c.patience},       {"init_scale", c.init_scale},
          {"seed", c.seed}};
}

ordered_json to_json(const rbf::RbfTrainConfig& c) {
  ordered_json j;
  j["neurons"] = c.neurons;
  j["center_method"] = c.center_method == rbf::CenterMethod::kKMeans ? "kmeans" : "random_subset";
  j["kmeans_max_iters"] = c.kmeans_max_iters;
  j["ridge"] = c.ridge;
  if (c.fixed_spread)
    j["spread"] = ordered_json{{"fixed", *c.fixed_spread}};
  else
    j["spread"] = "max_dist_heuristic";
  j["seed"] = c.seed;
  return j;
}

ordered_json to_json(const Normalizer& n) {
  ordered_json j;
  j["features"] = kFeatureNames;
  j["min"] = n.min();
  j["max"] = n.max();
  j["range"] = {n.range().lo, n.range().hi};
  j["fingerprint"] = n.fingerprint();
  return j;
}

Normalizer normalizer_from_json(const json& j) {
  const auto lo = get<std::array<double, kFeatureCount>>(j, "min", "normalizer");
  const auto hi = get<std::array<double, kFeatureCount>>(j, "max", "normalizer");
  const auto range = get<std::array<double, 2>>(j, "range", "normalizer");
  Normalizer n(lo, hi, Interval{range[0], range[1]});
  if (j.contains("fingerprint") && get<std::string>(j, "fingerprint", "normalizer") != n.fingerprint())
    throw ValidationError("normalizer: fingerprint does not match the stored extrema");
  return n;
}

ordered_json to_json(const TrainedModel& model) {
  ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = to_string(model.kind());
  std::visit(
      [&](const auto& net) {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, mlp::MlpModel>) {
          j["architecture"] = {{"inputs", kInputCount}, {"hidden", net.hidden_count()}};
          j["parameters"] = {{"input_weights", to_vector(net.input_weights)},
                             {"hidden_bias", to_vector(net.hidden_bias)},
                             {"output_weights", to_vector(net.output_weights)},
                             {"output_bias", net.output_bias}};
        } else {
          j["architecture"] = {{"inputs", kInputCount}, {"neurons", net.neuron_count()}};
          j["parameters"] = {{"centers", to_vector(net.centers)},
                             {"spread", net.spread},
                             {"weights", to_vector(net.weights)},
                             {"bias", net.bias}};
        }
      },
      model.network);
  j["normalizer"] = to_json(model.normalizer);
  j["config"] = model.config;
  return j;
}

TrainedModel model_from_json(const json& j) {
  if (get<int>(j, "schema_version", "model file") != kModelSchemaVersion)
    throw ValidationError("model file: unsupported schema_version");
  const ModelKind kind = parse_model_kind(get<std::string>(j, "kind", "model file"));
  const json& arch = j.contains("architecture") ? j.at("architecture") : json();
  const json& params = j.contains("parameters") ? j.at("parameters") : json();
  if (get<std::size_t>(arch, "inputs", "architecture") != kInputCount)
    throw ValidationError("model file: expected 5 inputs");

  TrainedModel model;
  if (kind == ModelKind::kMlp) {
    const int h = get<int>(arch, "hidden", "architecture");
    if (h < 1) throw ValidationError("model file: hidden must be >= 1");
    mlp::MlpModel m;
    m.input_weights = to_matrix(get<std::vector<double>>(params, "input_weights", "parameters"), h,
                                kInputCount, "input_weights");
    m.hidden_bias = to_column(get<std::vector<double>>(params, "hidden_bias", "parameters"), h,
                              "hidden_bias");
    m.output_weights = to_column(get<std::vector<double>>(params, "output_weights", "parameters"),
                                 h, "output_weights");
    m.output_bias = get<double>(params, "output_bias", "parameters");
    mlp::validate(m);
    model.network = std::move(m);
  } else {
    const int k = get<int>(arch, "neurons", "architecture");
    if (k < 1) throw ValidationError("model file: neurons must be >= 1");
    rbf::RbfModel m;
    m.centers = to_matrix(get<std::vector<double>>(params, "centers", "parameters"), k, kInputCount,
                          "centers");
    m.spread = get<double>(params, "spread", "parameters");
    m.weights = to_column(get<std::vector<double>>(params, "weights", "parameters"), k, "weights");
    m.bias = get<double>(params, "bias", "parameters");
    rbf::validate(m);
    model.network = std::move(m);
  }
  if (!j.contains("normalizer")) throw ValidationError("model file: missing key 'normalizer'");
  model.normalizer = normalizer_from_json(j.at("normalizer"));
  if (j.contains("config")) model.config = j.at("config");
  return model;
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_json_file(const ordered_json& doc, const std::string& path) {
  write_text_file(doc.dump(2) + "\n", path);
}

void save_model(const TrainedModel& model, const std::string& path) {
  write_json_file(to_json(model), path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("model '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace hallnet
