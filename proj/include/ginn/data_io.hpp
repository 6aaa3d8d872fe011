#pragma once

#include <filesystem>
#include <vector>

#include "ginn/tensor.hpp"

namespace ginn {

/// Whitespace-delimited numeric text: one row per line, `#` comments and
/// blank lines skipped. Every row must have the same number of columns.
std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path);

/// Interprets each table row as one sample with `nodes * channels` values
/// in node-major order (node 0's channels first). Column-count mismatches
/// raise ShapeError naming the offending dimension.
BatchTensor table_to_batch(const std::vector<std::vector<double>>& table, int nodes,
                           int channels, const std::string& what);

/// One line per sample, node-major, tab-separated, shortest round-trip
/// formatting (re-reading gives back the same doubles).
void write_batch(const BatchTensor& t, const std::filesystem::path& path);

std::string format_double(double v);

} // namespace ginn
