#include "hallnet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hallnet/config.hpp"
#include "hallnet/csv.hpp"
#include "hallnet/error.hpp"
#include "hallnet/experiment.hpp"
#include "hallnet/model_io.hpp"
#include "hallnet/simulator.hpp"

namespace hallnet::cli {
namespace {

namespace fs = std::filesystem;

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(Error::Category::kValidation);
  }
}

RunConfig require_config(const Options& opts) {
  if (!opts.config) throw ValidationError("--config is required");
  return load_config(*opts.config);
}

std::string require_path(const std::optional<std::string>& flag,
                         const std::optional<std::string>& fallback, const char* what) {
  if (flag) return *flag;
  if (fallback) return *fallback;
  throw ValidationError(std::string("missing ") + what);
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

// Refuses to write over any input file.
void guard_outputs(std::initializer_list<std::string> outputs,
                   std::initializer_list<std::string> inputs) {
  for (const auto& o : outputs)
    for (const auto& i : inputs)
      if (!i.empty() && same_file(o, i))
        throw ValidationError("output '" + o + "' would overwrite input '" + i + "'");
}

struct Prepared {
  Dataset data;
  DataSplit split;
  Normalizer normalizer;
};

Prepared prepare(const RunConfig& config, const std::string& data_path) {
  Prepared p;
  p.data = read_dataset(data_path);
  p.split = hallnet::split(p.data, config.split, config.split_seed());
  p.normalizer = Normalizer::fit(p.split.train, config.normalization_range);
  return p;
}

}  // namespace

std::string sibling_path(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  if (p.has_extension()) p.replace_extension();
  return p.string() + suffix;
}

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = require_config(opts);
    const std::string path = require_path(opts.out, config.io.out, "output path (--out)");
    guard_outputs({path}, {opts.config.value_or("")});
    const Dataset data =
        sim::generate(config.design, config.hall, config.simulate_seed(), config.parallel);
    write_dataset(path, data);
    out << "samples: " << data.size() << "\nseed: " << config.seed << '\n';
  });
}

int cmd_train(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = require_config(opts);
    const ModelKind kind = opts.kind ? parse_model_kind(*opts.kind) : config.train_kind;
    const std::string data_path = require_path(opts.data, config.io.data, "data path (--data)");
    const std::optional<std::string> model_flag =
        opts.models.empty() ? opts.out : std::optional<std::string>(opts.models.front());
    const std::string model_path = require_path(model_flag, config.io.model, "model path (--model)");
    guard_outputs({model_path}, {data_path, *opts.config});

    const Prepared p = prepare(config, data_path);
    const Batch train = normalize(p.normalizer, p.split.train);
    TrainedModel model;
    model.normalizer = p.normalizer;
    if (kind == ModelKind::kMlp) {
      const auto mlp_config = config.mlp_config();
      model.network = mlp::train(mlp_config, train, normalize(p.normalizer, p.split.validation)).model;
      model.config = to_json(mlp_config);
    } else {
      const auto rbf_config = config.rbf_config();
      model.network = rbf::train(rbf_config, train);
      model.config = to_json(rbf_config);
    }
    save_model(model, model_path);
    const auto report = metrics::evaluate(model.predictor(), p.split.test, p.normalizer);
    out << metrics::to_json(report).dump(2) << '\n';
  });
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = require_config(opts);
    const std::string data_path = require_path(opts.data, config.io.data, "data path (--data)");
    const std::string report_path = require_path(opts.out, config.io.out, "report path (--out)");
    const std::string text_path = sibling_path(report_path, ".txt");
    const std::string rbf_path = sibling_path(report_path, ".rbf.json");
    const std::string mlp_path = sibling_path(report_path, ".mlp.json");
    guard_outputs({report_path, text_path, rbf_path, mlp_path}, {data_path, *opts.config});

    const Prepared p = prepare(config, data_path);
    const auto sweep =
        experiment::run_rbf_sweep(config.rbf_config(), p.split, p.normalizer, config.sweep_grid,
                                  config.plateau_tolerance, config.parallel);
    nlohmann::ordered_json doc;
    doc["rbf_sweep"] = experiment::to_json(sweep);
    std::string text = experiment::to_text(sweep);
    if (config.mlp_repetitions > 0) {
      const auto reps = experiment::run_mlp_repetitions(
          config.mlp_config(), p.split, p.normalizer, config.mlp_repetitions, config.parallel);
      doc["mlp_repetitions"] = experiment::to_json(reps);
      text += "\n" + experiment::to_text(reps);
      save_model(reps.best, mlp_path);
    }
    save_model(sweep.selected, rbf_path);
    write_json_file(doc, report_path);
    write_text_file(text, text_path);
    out << text;
  });
}

int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = require_config(opts);
    if (opts.models.size() != 2)
      throw ValidationError("compare needs exactly two --model paths");
    const std::string data_path = require_path(opts.data, config.io.data, "data path (--data)");
    const std::string report_path = require_path(opts.out, config.io.out, "report path (--out)");

    const TrainedModel first = load_model(opts.models[0]);
    const TrainedModel second = load_model(opts.models[1]);
    const Prepared p = prepare(config, data_path);
    const auto report = experiment::compare(first, second, p.split.test);

    std::vector<std::string> deviation_paths;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      std::string tag = report.rows[i].label;
      for (auto& ch : tag) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (report.rows[0].label == report.rows[1].label) tag += std::to_string(i + 1);
      deviation_paths.push_back(sibling_path(report_path, ".deviation_" + tag + ".csv"));
    }
    const std::string text_path = sibling_path(report_path, ".txt");
    for (const auto& o : {report_path, text_path, deviation_paths[0], deviation_paths[1]})
      guard_outputs({o}, {data_path, *opts.config, opts.models[0], opts.models[1]});

    write_json_file(experiment::to_json(report), report_path);
    write_text_file(experiment::to_text(report), text_path);
    const TrainedModel* models[] = {&first, &second};
    for (std::size_t i = 0; i < 2; ++i)
      write_text_file(experiment::to_csv(experiment::deviation_series(*models[i], p.split.test)),
                      deviation_paths[i]);
    out << experiment::to_text(report);
  });
}

int cmd_predict(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<RunConfig> config;
    if (opts.config) config = load_config(*opts.config);
    const auto io_model = config ? config->io.model : std::nullopt;
    const auto io_data = config ? config->io.data : std::nullopt;
    const std::optional<std::string> model_flag =
        opts.models.empty() ? std::nullopt : std::optional<std::string>(opts.models.front());
    const std::string model_path = require_path(model_flag, io_model, "model path (--model)");
    const std::string data_path = require_path(opts.data, io_data, "input path (--data)");

    const TrainedModel model = load_model(model_path);
    const auto rows = read_inputs(data_path);
    std::ostringstream csv;
    csv << "index,prediction\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      csv << i << ',' << format_double(model.predict(rows[i])) << '\n';
    if (opts.out) {
      guard_outputs({*opts.out}, {data_path, model_path});
      write_text_file(csv.str(), *opts.out);
    } else {
      out << csv.str();
    }
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hall temperature predictors: simulate, train, sweep, compare, predict", "hallnet"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config, "JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--data", opts.data, "dataset or input CSV");
    sub->add_option("--out", opts.out, "output path");
    sub->add_option("--model", opts.models, "model JSON path (given twice for compare)");
  };
  auto* simulate = app.add_subcommand("simulate", "generate a factorial synthetic dataset");
  auto* train = app.add_subcommand("train", "train one network and print test metrics");
  auto* sweep = app.add_subcommand("sweep", "RBF neuron sweep and MLP repetitions");
  auto* compare = app.add_subcommand("compare", "compare an MLP and an RBF model");
  auto* predict = app.add_subcommand("predict", "predict hall temperature for input rows");
  add_common(simulate, true);
  add_common(train, true);
  add_common(sweep, true);
  add_common(compare, true);
  add_common(predict, false);
  train->add_option("--kind", opts.kind, "mlp or rbf (overrides train.kind)")
      ->check(CLI::IsMember({"mlp", "rbf"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(Error::Category::kValidation);
  }

  if (simulate->parsed()) return cmd_simulate(opts, out, err);
  if (train->parsed()) return cmd_train(opts, out, err);
  if (sweep->parsed()) return cmd_sweep(opts, out, err);
  if (compare->parsed()) return cmd_compare(opts, out, err);
  return cmd_predict(opts, out, err);
}

}  // namespace hallnet::cli
