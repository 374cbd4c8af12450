// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "hallnet/cli.hpp"
#include "hallnet/config.hpp"
#include "hallnet/experiment.hpp"
#include "hallnet/metrics.hpp"
#include "hallnet/mlp.hpp"
#include "hallnet/model_io.hpp"
#include "hallnet/rbf.hpp"
#include "hallnet/simulator.hpp"
#include "oracles.hpp"
#include "sim_support.hpp"

using namespace hallnet;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Check metric_oracle() {
  Check c;
  const auto start = Clock::now();
  Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(5.0, 30.0);
      p[i] = a[i] + rng.normal(0.0, 1.0);
    }
    const auto close = [](double x, double y) { return oracle::rel_diff(x, y) <= 1e-12; };
    c.require(close(metrics::mse(a, p), oracle::mse(a, p)), "mse trial " + std::to_string(trial));
    c.require(close(metrics::rmse(a, p), oracle::rmse(a, p)), "rmse trial " + std::to_string(trial));
    c.require(close(metrics::mae(a, p), oracle::mae(a, p)), "mae trial " + std::to_string(trial));
    c.require(close(metrics::r_paper(a, p), oracle::r_paper(a, p)),
              "r_paper trial " + std::to_string(trial));
  }
  c.require(seconds_since(start) < 1.0, "runtime over 1 s");
  return c;
}

Check reference_logic() {
  Check c;
  const std::vector<experiment::RepetitionRow> rows{{1, 0.55064, 0.42202, 0.84431},
                                                    {2, 0.53321, 0.41001, 0.82541},
                                                    {3, 0.52248, 0.41056, 0.84522}};
  c.require(experiment::select_best_repetition(std::vector<double>{0.84431, 0.82541, 0.84522}) == 2,
            "best repetition is not 2");
  const auto s = experiment::summarize_repetitions(rows);
  const auto five = [](double x) { return std::floor(x * 1e5) / 1e5; };
  c.require(s.minimum.validation == 0.52248 && s.minimum.training == 0.41001 &&
                s.minimum.test == 0.82541,
            "minimum row");
  c.require(s.maximum.validation == 0.55064 && s.maximum.training == 0.42202 &&
                s.maximum.test == 0.84522,
            "maximum row");
  c.require(five(s.average.validation) == 0.53544 && five(s.average.training) == 0.41419 &&
                five(s.average.test) == 0.83831,
            "average row");
  const std::vector<int> grid{4, 8, 12, 16, 20, 24};
  const std::vector<double> rmse{0.2897, 0.1925, 0.1589, 0.1205, 0.0787, 0.0787};
  c.require(experiment::select_plateau(grid, rmse, experiment::kDefaultPlateauTolerance) == 20,
            "plateau is not 20");
  return c;
}

Check gradient_check() {
  Check c;
  const auto start = Clock::now();
  Rng rng(1003);
  const int sizes[] = {1, 4, 12};
  for (int trial = 0; trial < 20; ++trial) {
    const int h = sizes[trial % 3];
    mlp::MlpModel m = mlp::MlpModel::zeros(h);
    Eigen::VectorXd theta = m.flatten();
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = rng.uniform(-1.0, 1.0);
    m = mlp::MlpModel::unflatten(h, theta);
    Batch b;
    for (int i = 0; i < 16; ++i) {
      Features x;
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);
      b.inputs.push_back(x);
      b.targets.push_back(rng.uniform(-1.0, 1.0));
    }
    const Eigen::VectorXd analytic = mlp::gradient(m, b);
    const auto numeric = oracle::central_difference(
        [&](const std::vector<double>& t) {
          const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(t.data(), theta.size());
          return mlp::batch_mse(mlp::MlpModel::unflatten(h, v), b);
        },
        std::vector<double>(theta.data(), theta.data() + theta.size()), 1e-5);
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      c.require(oracle::rel_diff(analytic[i], numeric[static_cast<std::size_t>(i)], 1e-4) <= 1e-5,
                "trial " + std::to_string(trial) + " H=" + std::to_string(h) + " coordinate " +
                    std::to_string(i));
  }
  c.require(seconds_since(start) < 5.0, "runtime over 5 s");
  return c;
}

Check rbf_interpolation() {
  Check c;
  const auto start = Clock::now();
  const auto all = sim::generate(sim::TreatmentDesign{}, sim::HallParams{}, 1004);
  Rng rng(1004);
  Dataset picked;
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < 30; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
    picked.samples.push_back(all.samples[order[i]]);
  }
  const auto norm = Normalizer::fit(picked);
  rbf::RbfTrainConfig config;
  config.neurons = 30;
  config.center_method = rbf::CenterMethod::kRandomSubset;
  config.ridge = 0.0;
  config.seed = 1004;
  const TrainedModel model{rbf::train(config, normalize(norm, picked)), norm, {}};
  const auto report = metrics::evaluate(model.predictor(), picked, norm);
  std::ostringstream msg;
  msg << "training RMSE " << report.rmse << " degC";
  c.require(report.rmse < 1e-6, msg.str());
  c.require(seconds_since(start) < 1.0, "runtime over 1 s");
  return c;
}

Check sweep_trend() {
  Check c;
  const auto start = Clock::now();
  RunConfig config;
  config.design.repetitions = 3;
  const auto data = sim::generate(config.design, config.hall, config.simulate_seed());
  c.require(data.size() == 729, "dataset has " + std::to_string(data.size()) + " samples");
  const auto parts = split(data, config.split, config.split_seed());
  const auto norm = Normalizer::fit(parts.train, config.normalization_range);
  const std::vector<int> grid{4, 8, 12, 16, 20, 24};
  const auto sweep = experiment::run_rbf_sweep(config.rbf_config(), parts, norm, grid);
  std::ostringstream msg;
  msg << "RMSE K=4 " << sweep.rows.front().rmse << ", K=24 " << sweep.rows.back().rmse;
  c.require(sweep.rows.back().rmse <= sweep.rows.front().rmse, msg.str());
  c.require(std::find(grid.begin(), grid.end(), sweep.selected_neurons) != grid.end(),
            "selected K not in grid");
  c.require(seconds_since(start) < 60.0, "runtime over 60 s");
  if (c.ok) c.detail = msg.str() + ", selected K=" + std::to_string(sweep.selected_neurons);
  return c;
}

Check simulator_physics() {
  using namespace testing_support;
  Check c;
  const auto start = Clock::now();
  Rng rng(1006);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_params(rng);
    p.compost_heat = 0.0;
    const auto ctl = random_controls(rng);
    const double lo = std::min({p.initial_temp, ctl.water_temp, ctl.ambient_temp});
    const double hi = std::max({p.initial_temp, ctl.water_temp, ctl.ambient_temp});
    double t = p.initial_temp;
    for (int k = 0; k < 300; ++k) {
      t = sim::step(t, ctl, p);
      c.require(t >= lo - 1e-9 && t <= hi + 1e-9, "convex hull, trial " + std::to_string(trial));
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_params(rng);
    p.compost_heat = 0.0;
    auto ctl = random_controls(rng);
    ctl.water_tap = 0.0;
    ctl.fresh_damper = 0.0;
    c.require(sim::settle(p.initial_temp, ctl, p, 200) == p.initial_temp,
              "fixed point, trial " + std::to_string(trial));
  }
  for (int checked = 0; checked < 100;) {
    const auto p = random_params(rng);
    const auto ctl = random_controls(rng);
    if (p.k_water == 0.0 || !water_above_trajectories(ctl, p)) continue;
    const auto t = settled_over_levels(ctl, p, true, 200);
    c.require(t[0] <= t[1] && t[1] <= t[2], "tap monotonicity, draw " + std::to_string(checked));
    ++checked;
  }
  for (int checked = 0; checked < 100;) {
    const auto p = random_params(rng);
    const auto ctl = random_controls(rng);
    if (p.k_fresh == 0.0 || !ambient_below_trajectories(ctl, p)) continue;
    const auto t = settled_over_levels(ctl, p, false, 200);
    c.require(t[0] >= t[1] && t[1] >= t[2], "fresh damper cooling, draw " + std::to_string(checked));
    ++checked;
  }
  c.require(seconds_since(start) < 5.0, "runtime over 5 s");
  return c;
}

int cli(std::vector<std::string> args, std::string& err_text) {
  args.insert(args.begin(), "hallnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  err_text = err.str();
  return code;
}

// simulate -> sweep -> compare in `dir`; returns every output file's bytes.
std::vector<std::pair<std::string, std::string>> pipeline(const fs::path& dir, bool parallel,
                                                          Check& c) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  nlohmann::ordered_json cfg = nlohmann::ordered_json::parse(R"({
    "schema_version": 1, "seed": 77,
    "mlp": {"hidden": 6, "max_epochs": 300, "patience": 50},
    "sweep": {"grid": [4, 8, 12, 16], "mlp_repetitions": 3}
  })");
  cfg["parallel"] = parallel;
  write_json_file(cfg, (dir / "run.json").string());
  const auto p = [&](const char* name) { return (dir / name).string(); };
  std::string err;
  c.require(cli({"simulate", "--config", p("run.json"), "--out", p("data.csv")}, err) == 0,
            "simulate: " + err);
  c.require(cli({"sweep", "--config", p("run.json"), "--data", p("data.csv"), "--out",
                 p("sweep.json")},
                err) == 0,
            "sweep: " + err);
  c.require(cli({"compare", "--config", p("run.json"), "--data", p("data.csv"), "--model",
                 p("sweep.mlp.json"), "--model", p("sweep.rbf.json"), "--out", p("compare.json")},
                err) == 0,
            "compare: " + err);
  std::vector<std::pair<std::string, std::string>> files;
  for (const char* name : {"data.csv", "sweep.json", "sweep.txt", "sweep.rbf.json",
                           "sweep.mlp.json", "compare.json", "compare.txt",
                           "compare.deviation_mlp.csv", "compare.deviation_rbf.csv"}) {
    c.require(fs::exists(dir / name), std::string("missing ") + name);
    files.emplace_back(name, slurp(dir / name));
  }
  return files;
}

Check end_to_end_determinism() {
  Check c;
  const fs::path root = fs::temp_directory_path() / "hallnet_acceptance_e2e";
  const auto first = pipeline(root / "serial_1", false, c);
  const auto second = pipeline(root / "serial_2", false, c);
  const auto third = pipeline(root / "parallel", true, c);
  for (std::size_t i = 0; i < first.size() && c.ok; ++i) {
    c.require(first[i].second == second[i].second, first[i].first + " differs between runs");
    c.require(first[i].second == third[i].second, first[i].first + " differs with parallelism");
  }
  if (c.ok) fs::remove_all(root);
  return c;
}

Check persistence_round_trip() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / "hallnet_acceptance_io";
  fs::remove_all(dir);
  fs::create_directories(dir);
  sim::TreatmentDesign design;
  design.settle_steps = 60;
  const auto data = sim::generate(design, sim::HallParams{}, 1008);
  const auto parts = split(data, {}, 1008);
  const auto norm = Normalizer::fit(parts.train);
  const auto train = normalize(norm, parts.train);
  mlp::MlpTrainConfig mc;
  mc.hidden_count = 6;
  mc.max_epochs = 200;
  mc.seed = 1;
  rbf::RbfTrainConfig rc;
  rc.neurons = 12;
  rc.seed = 2;
  const TrainedModel models[] = {
      {mlp::train(mc, train, normalize(norm, parts.validation)).model, norm, to_json(mc)},
      {rbf::train(rc, train), norm, to_json(rc)}};
  Rng rng(1008);
  for (const auto& m : models) {
    const auto path = (dir / (to_string(m.kind()) + ".json")).string();
    save_model(m, path);
    const auto loaded = load_model(path);
    for (int i = 0; i < 100; ++i) {
      const Features x{rng.uniform(-10, 10), rng.uniform(30, 50), rng.uniform(), rng.uniform(),
                       rng.uniform()};
      c.require(loaded.predict(x) == m.predict(x), to_string(m.kind()) + " input " + std::to_string(i));
    }
  }
  fs::remove_all(dir);
  return c;
}

Check metric_inequalities() {
  Check c;
  Rng rng(1009);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-20.0, 40.0);
      p[i] = a[i] + rng.normal(0.0, rng.uniform(0.01, 5.0));
    }
    const double e = metrics::mae(a, p), r = metrics::rmse(a, p), m = metrics::mse(a, p);
    c.require(e <= r, "mae > rmse, trial " + std::to_string(trial));
    c.require(oracle::rel_diff(r * r, m) <= 1e-12, "rmse^2 != mse, trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(50);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-20.0, 40.0);
      b[i] = 2.0 * a[i] + 3.0;
    }
    c.require(std::abs(metrics::r_paper(a, a) - 1.0) <= 1e-12, "r_paper(A, A) != 1");
    c.require(std::abs(metrics::r_pearson(a, b) - 1.0) <= 1e-12, "r_pearson(A, 2A+3) != 1");
  }
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"metric oracle equivalence", metric_oracle},
      {"reference selection logic", reference_logic},
      {"MLP gradient check", gradient_check},
      {"RBF interpolation", rbf_interpolation},
      {"RBF sweep trend on 729 samples", sweep_trend},
      {"simulator physics", simulator_physics},
      {"end-to-end determinism", end_to_end_determinism},
      {"persistence round trip", persistence_round_trip},
      {"metric inequalities", metric_inequalities},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto start = Clock::now();
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << name
              << " (" << std::fixed << std::setprecision(2) << elapsed << " s)";
    if (!result.detail.empty()) std::cout << " - " << result.detail;
    std::cout << '\n';
    if (!result.ok) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}
