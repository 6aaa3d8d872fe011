#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ginn/gi_layer.hpp"
#include "ginn/sparse_adjacency.hpp"
#include "ginn/tensor.hpp"

namespace ginn {

/// Ranges for randomized correctness trials.
struct SweepOptions {
    int n_min = 2;
    int n_max = 30;
    double max_density = 0.4;
    int min_features = 1;
    int max_features = 4;   // K drawn from min..max
    int min_filters = 1;
    int max_filters = 4;    // F drawn from min..max
    int max_batch = 5;      // M drawn from 1..max_batch
    std::vector<double> lambdas = {0.0, 0.5, 1.0, 2.0};
    bool random_subsets = true;     // restrict to random V1, V2
    bool random_activation = true;  // otherwise identity
    bool random_pool = true;        // otherwise no pooling
    std::optional<bool> symmetric;  // force graph symmetry; unset = coin flip
};

/// One randomized layer + input, with the metadata needed to report or
/// replay it.
struct TrialInstance {
    int n = 0;                  // full-graph node count
    double density = 0.0;
    std::vector<Edge> edges;    // full-graph edge list
    std::vector<int> v1;
    std::vector<int> v2;
    GILayer layer;
    BatchTensor x;
};

/// Draws a random trial: ER graph, node subsets, layer config, parameters
/// (bias randomized when enabled), and input batch.
TrialInstance random_trial(std::mt19937_64& rng, const SweepOptions& opt);

/// Same, but over a fixed edge list (graph loaded from a file); only the
/// subsets, config, parameters, and input are random.
TrialInstance random_trial_on_graph(std::mt19937_64& rng, const SweepOptions& opt,
                                    const std::vector<Edge>& edges, int n);

/// max|a - b| / max(inf-norm a, inf-norm b, eps): the normalized residual
/// used for oracle-equivalence verdicts.
double max_relative_error(const Tensor3& a, const Tensor3& b);

/// Sparse forward vs. the materialized dense tensor path on one instance.
double forward_vs_dense_error(const GILayer& layer, const BatchTensor& x);

struct GradCheckReport {
    bool pass = true;
    double max_error = 0.0;   // worst |analytic - fd| / tolerance; pass iff <= 1
    std::string worst;        // coordinate behind max_error
};

/// Central finite differences of the scalar loss sum(0.5*Y^2) against
/// backward(), over every weight, bias, and input coordinate. A component
/// passes when |g - fd| <= max(rtol * max(|g|, |fd|), atol).
GradCheckReport gradient_fd_check(const GILayer& layer, const BatchTensor& x,
                                  double step = 1e-5, double rtol = 1e-5,
                                  double atol = 1e-8);

/// False when the instance sits too close to a relu kink or a pooling
/// argmax switch for finite differences to be trustworthy.
bool fd_well_conditioned(const GILayer& layer, const BatchTensor& x);

/// random_trial filtered through fd_well_conditioned (bounded retries).
TrialInstance random_fd_trial(std::mt19937_64& rng, const SweepOptions& opt);

} // namespace ginn
