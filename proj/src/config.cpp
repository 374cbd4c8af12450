#include "hallnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "hallnet/error.hpp"
#include "hallnet/random.hpp"

namespace hallnet {
namespace {

using json = nlohmann::ordered_json;

// Typed access to one JSON object with dotted-path diagnostics.
class Block {
 public:
  Block(const json& node, std::string path, std::initializer_list<const char*> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(where() + " must be an object");
    for (const auto& [key, value] : node_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return key == a; });
      if (!known) throw ValidationError("unknown key '" + qualify(key) + "'");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& at(const char* key) const { return node_.at(key); }
  std::string qualify(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void read(const char* key, double& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number()) throw type_error(key, "a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ValidationError(qualify(key) + " must be finite");
  }

  void read(const char* key, int& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_integer()) throw type_error(key, "an integer");
    out = v.get<int>();
  }

  void read(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw type_error(key, "a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void read(const char* key, bool& out) const {
    if (!has(key)) return;
    if (!at(key).is_boolean()) throw type_error(key, "a boolean");
    out = at(key).get<bool>();
  }

  void read(const char* key, std::optional<std::string>& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) throw type_error(key, "a string");
    out = at(key).get<std::string>();
  }

  void read(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_array()) throw type_error(key, "an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) throw type_error(key, "an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  void read(const char* key, std::vector<int>& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_array()) throw type_error(key, "an array of integers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw type_error(key, "an array of integers");
      out.push_back(x.get<int>());
    }
  }

  ValidationError invalid(const char* key, const std::string& why) const {
    return ValidationError(qualify(key) + " " + why);
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }
  ValidationError type_error(const char* key, const char* expected) const {
    return ValidationError(qualify(key) + " must be " + expected);
  }

  const json& node_;
  std::string path_;
};

// Wraps a component validator so its message carries the config section.
template <typename Fn>
void checked(const char* section, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(section) + ": " + e.what());
  }
}

void parse_simulator(const json& node, RunConfig& c) {
  const Block sim(node, "simulator", {"design", "params"});
  if (sim.has("design")) {
    const Block d(sim.at("design"), "simulator.design",
                  {"ambient_levels", "water_levels", "fresh_levels", "circ_levels", "tap_levels",
                   "repetitions", "settle_steps"});
    d.read("ambient_levels", c.design.ambient_levels);
    d.read("water_levels", c.design.water_levels);
    d.read("fresh_levels", c.design.fresh_levels);
    d.read("circ_levels", c.design.circ_levels);
    d.read("tap_levels", c.design.tap_levels);
    d.read("repetitions", c.design.repetitions);
    d.read("settle_steps", c.design.settle_steps);
  }
  if (sim.has("params")) {
    const Block p(sim.at("params"), "simulator.params",
                  {"thermal_capacity", "k_water", "k_fresh", "compost_heat", "noise_std", "dt",
                   "initial_temp"});
    p.read("thermal_capacity", c.hall.thermal_capacity);
    p.read("k_water", c.hall.k_water);
    p.read("k_fresh", c.hall.k_fresh);
    p.read("compost_heat", c.hall.compost_heat);
    p.read("noise_std", c.hall.noise_std);
    p.read("dt", c.hall.dt);
    p.read("initial_temp", c.hall.initial_temp);
  }
  checked("simulator.design", [&] { sim::validate(c.design); });
  checked("simulator.params", [&] { sim::validate(c.hall); });
}

void parse_rbf(const json& node, RunConfig& c) {
  const Block b(node, "rbf",
                {"neurons", "center_method", "kmeans_max_iters", "ridge", "spread"});
  b.read("neurons", c.rbf.neurons);
  b.read("kmeans_max_iters", c.rbf.kmeans_max_iters);
  b.read("ridge", c.rbf.ridge);
  if (b.has("center_method")) {
    const auto& v = b.at("center_method");
    if (v == "kmeans")
      c.rbf.center_method = rbf::CenterMethod::kKMeans;
    else if (v == "random_subset")
      c.rbf.center_method = rbf::CenterMethod::kRandomSubset;
    else
      throw b.invalid("center_method", "must be \"kmeans\" or \"random_subset\"");
  }
  if (b.has("spread")) {
    const auto& v = b.at("spread");
    if (v == "max_dist_heuristic") {
      c.rbf.fixed_spread.reset();
    } else if (v.is_object()) {
      const Block s(v, "rbf.spread", {"fixed"});
      if (!s.has("fixed")) throw ValidationError("rbf.spread.fixed is required");
      double sigma = 0.0;
      s.read("fixed", sigma);
      c.rbf.fixed_spread = sigma;
    } else {
      throw b.invalid("spread", "must be \"max_dist_heuristic\" or {\"fixed\": sigma}");
    }
  }
  rbf::validate(c.rbf);
}

}  // namespace

std::uint64_t RunConfig::simulate_seed() const { return derive_seed(seed, 1); }
std::uint64_t RunConfig::split_seed() const { return derive_seed(seed, 2); }
std::uint64_t RunConfig::mlp_seed() const { return derive_seed(seed, 3); }
std::uint64_t RunConfig::rbf_seed() const { return derive_seed(seed, 4); }

mlp::MlpTrainConfig RunConfig::mlp_config() const {
  auto c = mlp;
  c.seed = mlp_seed();
  return c;
}

rbf::RbfTrainConfig RunConfig::rbf_config() const {
  auto c = rbf;
  c.seed = rbf_seed();
  return c;
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  const Block root(doc, "",
                   {"schema_version", "seed", "parallel", "simulator", "split", "normalization",
                    "mlp", "rbf", "train", "sweep", "io"});
  if (!root.has("schema_version")) throw ValidationError("schema_version is required");
  int version = 0;
  root.read("schema_version", version);
  if (version != kConfigSchemaVersion)
    throw root.invalid("schema_version", "must be " + std::to_string(kConfigSchemaVersion));
  root.read("seed", c.seed);
  root.read("parallel", c.parallel);

  if (root.has("simulator")) {
    parse_simulator(root.at("simulator"), c);
  }

  if (root.has("split")) {
    const Block b(root.at("split"), "split", {"train", "validation", "test"});
    b.read("train", c.split.train);
    b.read("validation", c.split.validation);
    b.read("test", c.split.test);
  }
  for (double r : {c.split.train, c.split.validation, c.split.test})
    if (r < 0.0) throw ValidationError("split ratios must be non-negative");
  if (std::abs(c.split.train + c.split.validation + c.split.test - 1.0) > 1e-9)
    throw ValidationError("split ratios must sum to 1");

  if (root.has("normalization")) {
    const Block b(root.at("normalization"), "normalization", {"range"});
    std::vector<double> range{c.normalization_range.lo, c.normalization_range.hi};
    b.read("range", range);
    if (range.size() != 2 || !(range[0] < range[1]))
      throw b.invalid("range", "must be [lo, hi] with lo < hi");
    c.normalization_range = {range[0], range[1]};
  }

  if (root.has("mlp")) {
    const Block b(root.at("mlp"), "mlp",
                  {"hidden", "learning_rate", "momentum", "max_epochs", "patience", "init_scale"});
    b.read("hidden", c.mlp.hidden_count);
    b.read("learning_rate", c.mlp.learning_rate);
    b.read("momentum", c.mlp.momentum);
    b.read("max_epochs", c.mlp.max_epochs);
    b.read("patience", c.mlp.patience);
    b.read("init_scale", c.mlp.init_scale);
  }
  mlp::validate(c.mlp);

  if (root.has("rbf")) parse_rbf(root.at("rbf"), c);

  if (root.has("train")) {
    const Block b(root.at("train"), "train", {"kind"});
    std::optional<std::string> kind;
    b.read("kind", kind);
    if (kind) checked("train.kind", [&] { c.train_kind = parse_model_kind(*kind); });
  }

  if (root.has("sweep")) {
    const Block b(root.at("sweep"), "sweep", {"grid", "plateau_tolerance", "mlp_repetitions"});
    b.read("grid", c.sweep_grid);
    b.read("plateau_tolerance", c.plateau_tolerance);
    b.read("mlp_repetitions", c.mlp_repetitions);
    if (c.sweep_grid.empty()) throw b.invalid("grid", "must not be empty");
    for (std::size_t i = 0; i < c.sweep_grid.size(); ++i) {
      if (c.sweep_grid[i] < 1) throw b.invalid("grid", "values must be >= 1");
      if (i > 0 && c.sweep_grid[i] <= c.sweep_grid[i - 1])
        throw b.invalid("grid", "must be strictly increasing");
    }
    if (c.plateau_tolerance < 0.0) throw b.invalid("plateau_tolerance", "must be >= 0");
    if (c.mlp_repetitions < 0) throw b.invalid("mlp_repetitions", "must be >= 0");
  }

  if (root.has("io")) {
    const Block b(root.at("io"), "io", {"data", "out", "model"});
    b.read("data", c.io.data);
    b.read("out", c.io.out);
    b.read("model", c.io.model);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace hallnet
