#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hallnet/domain.hpp"

namespace hallnet {

/// Exact header of the dataset format.
inline constexpr std::string_view kDatasetHeader =
    "ambient_temp,water_temp,fresh_damper,circ_damper,water_tap,hall_temp";

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::string& path, const Dataset& dataset);

/// Parses a dataset CSV. Columns are matched by name; a missing or unknown
/// column, a malformed number or an invalid sample is a ValidationError that
/// names the column or row.
Dataset read_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset read_dataset(const std::string& path);

/// Reads the five input columns for inference. A hall_temp column is allowed
/// and ignored. Every value must be finite.
std::vector<Features> read_inputs(std::istream& in);
std::vector<Features> read_inputs(const std::string& path);

}  // namespace hallnet
