#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hallnet::cli {

/// Options shared by every subcommand.
struct Options {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::optional<std::string> out;
  std::vector<std::string> models;
  std::optional<std::string> kind;
};

// Each command returns a process exit status: 0 success, 1 input or config
// validation, 2 I/O, 3 numerical failure, 4 artifact mismatch.
int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_train(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_predict(const Options& opts, std::ostream& out, std::ostream& err);

/// Parses `hallnet <command> [options]` and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Sibling artifact path: "dir/report.json" + ".txt" -> "dir/report.txt".
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace hallnet::cli
