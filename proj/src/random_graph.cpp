#include "ginn/random_graph.hpp"

#include <cmath>

#include "ginn/errors.hpp"
#include "ginn/rng.hpp"

namespace ginn {

std::vector<Edge> erdos_renyi(int n, double p, std::uint64_t seed, bool symmetric) {
    if (n < 0)
        throw InvalidValue("node count must be non-negative");
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw InvalidValue("edge probability must be in [0, 1]");

    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(p * n * n));
    if (symmetric) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (uniform01(rng) < p) {
                    edges.push_back({i, j, 1.0});
                    edges.push_back({j, i, 1.0});
                }
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && uniform01(rng) < p)
                    edges.push_back({i, j, 1.0});
    }
    return edges;
}

} // namespace ginn
