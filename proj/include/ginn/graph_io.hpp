#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ginn/sparse_adjacency.hpp"

namespace ginn {

/// Edges plus declared dimensions of a graph loaded from disk.
/// Edge-list files carry no dimension header, so rows/cols are inferred as
/// 1 + max index (square, over both axes); Matrix Market files declare them.
struct GraphData {
    int rows = 0;
    int cols = 0;
    std::vector<Edge> edges;
};

/// Reads `i<TAB>j[<TAB>value]` lines, `#` comments, default value 1.0.
/// Any whitespace separates fields.
GraphData read_edge_list(const std::filesystem::path& path);

/// Reads Matrix Market coordinate files, `real` or `pattern` field,
/// `general` or `symmetric` symmetry (symmetric entries are mirrored).
/// Indices are converted from 1-based to 0-based.
GraphData read_matrix_market(const std::filesystem::path& path);

/// Dispatches on the `%%MatrixMarket` banner, falling back to edge list.
GraphData load_graph(const std::filesystem::path& path);

} // namespace ginn
