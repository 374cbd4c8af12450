#include "hallnet/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "hallnet/error.hpp"

namespace hallnet {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t row, std::string_view column) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw ValidationError("row " + std::to_string(row) + ": column " + std::string(column) +
                          " is not a number: '" + std::string(field) + "'");
  return value;
}

// Maps each required column to its position in the header.
struct Header {
  std::array<std::optional<std::size_t>, kFeatureCount> position;
  std::size_t width = 0;
};

Header parse_header(std::string_view line, bool allow_missing_target) {
  Header header;
  const auto fields = split_fields(line);
  header.width = fields.size();
  for (std::size_t col = 0; col < fields.size(); ++col) {
    const auto name = trim(fields[col]);
    const auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), name);
    if (it == kFeatureNames.end())
      throw ValidationError("unknown column '" + std::string(name) + "'");
    auto& slot = header.position[static_cast<std::size_t>(it - kFeatureNames.begin())];
    if (slot) throw ValidationError("duplicate column '" + std::string(name) + "'");
    slot = col;
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (i == static_cast<std::size_t>(Feature::kHallTemp) && allow_missing_target) continue;
    if (!header.position[i])
      throw ValidationError("missing column '" + std::string(kFeatureNames[i]) + "'");
  }
  return header;
}

template <typename RowFn>
void for_each_row(std::istream& in, bool allow_missing_target, RowFn&& fn) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("missing CSV header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const Header header = parse_header(trim(line), allow_missing_target);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.width)
      throw ValidationError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.width) + " fields, got " +
                            std::to_string(fields.size()));
    std::array<double, kFeatureCount> values{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (header.position[i])
        values[i] = parse_number(fields[*header.position[i]], row, kFeatureNames[i]);
    }
    fn(row, values);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << kDatasetHeader << '\n';
  for (const auto& s : dataset.samples) {
    const auto v = s.values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) out << (i ? "," : "") << format_double(v[i]);
    out << '\n';
  }
}

void write_dataset(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(out, dataset);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Dataset read_dataset(std::istream& in, const std::string& source) {
  Dataset dataset;
  dataset.provenance = FileSource{source};
  for_each_row(in, false, [&](std::size_t row, const std::array<double, kFeatureCount>& v) {
    const Sample s = Sample::from_values(v);
    try {
      validate(s);
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(row) + ": " + e.what());
    }
    dataset.samples.push_back(s);
  });
  return dataset;
}

Dataset read_dataset(const std::string& path) {
  auto in = open_input(path);
  return read_dataset(in, path);
}

std::vector<Features> read_inputs(std::istream& in) {
  std::vector<Features> rows;
  for_each_row(in, true, [&](std::size_t row, const std::array<double, kFeatureCount>& v) {
    Features x{};
    for (std::size_t i = 0; i < kInputCount; ++i) {
      if (!std::isfinite(v[i]))
        throw ValidationError("row " + std::to_string(row) + ": column " +
                              std::string(kFeatureNames[i]) + " is not finite");
      x[i] = v[i];
    }
    rows.push_back(x);
  });
  return rows;
}

std::vector<Features> read_inputs(const std::string& path) {
  auto in = open_input(path);
  return read_inputs(in);
}

}  // namespace hallnet
