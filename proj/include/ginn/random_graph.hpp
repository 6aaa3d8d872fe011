#pragma once

#include <cstdint>
#include <vector>

#include "ginn/sparse_adjacency.hpp"

namespace ginn {

/// Erdős–Rényi G(n, p) without self-loops, unit edge weights.
/// Directed: every ordered pair (i, j), i != j, is an edge with
/// probability p. With `symmetric`, each unordered pair is drawn once and
/// stored in both directions. Same seed, same graph.
std::vector<Edge> erdos_renyi(int n, double p, std::uint64_t seed,
                              bool symmetric = false);

} // namespace ginn
