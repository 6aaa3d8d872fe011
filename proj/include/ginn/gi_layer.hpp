#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ginn/activations.hpp"
#include "ginn/sparse_adjacency.hpp"
#include "ginn/tensor.hpp"

namespace ginn {

/// Reduction applied across the filter axis after activation, collapsing
/// the output to one feature per node.
enum class Pool { mean, max, sum };

std::string to_string(Pool pool);
Pool pool_from_string(const std::string& name);

/// Hyperparameters of one versatile graph-informed layer.
struct GILayerConfig {
    double selfloop_value = 1.0;          // lambda in (A + lambda*I)|_{V1,V2}
    int num_filters = 1;                  // F, output features per node
    Activation activation = Activation::identity;
    bool use_bias = true;
    std::optional<Pool> pool;
};

/// Trainable state: one weight vector of length n1 per (input feature k,
/// filter l) pair, laid out as (K, F, n1), and an (n2, F) bias matrix.
struct GILayerParams {
    Tensor3 weights;
    Matrix bias;
    int num_features = 0;
};

/// Intermediate values captured during a training-mode forward pass so that
/// backward can skip recomputation: pre-activations and, under max pooling,
/// the winning filter per (sample, node).
struct ForwardTrace {
    Tensor3 pre_activation;        // (M, n2, F)
    std::vector<int> max_filter;   // M*n2 entries, row-major, max pool only
};

/// Gradients of a scalar loss with respect to one layer's parameters and
/// input, shaped exactly like the quantities they differentiate.
struct LayerGradients {
    Tensor3 weights;  // (K, F, n1)
    Matrix bias;      // (n2, F)
    Tensor3 input;    // (M, n1, K)
};

/// Versatile graph-informed layer.
///
/// Acts from node subset V1 to node subset V2 of a graph through the
/// augmented submatrix Â = (A + lambda*I)|_{V1,V2}, precomputed at build
/// time. For filter l the pre-activation is
///
///     Z[m, j, l] = sum_k sum_i  Â[i, j] * w[k, l, i] * X[m, i, k]  (+ B[j, l])
///
/// followed by the elementwise activation and the optional filter-axis
/// pooling. The dense stacked weight tensor this is equivalent to is never
/// materialized; the contraction runs over Â's stored entries with
/// on-the-fly row scaling, so memory stays O(nnz(Â) + parameters).
///
/// forward/backward never mutate the layer; concurrent evaluation against
/// one instance is safe. Parameter updates need exclusive access.
class GILayer {
public:
    /// Builds a layer over `adj` (the raw A|_{V1,V2}, without self-loops).
    /// Weights are drawn from uniform(-s, s) with s = sqrt(6 / (n1*K + n2*F)),
    /// biases start at zero; identical seeds give identical parameters.
    static GILayer build(SparseAdjacency adj, const GILayerConfig& cfg,
                         int num_features, std::uint64_t init_seed);

    /// Reassembles a layer around existing parameters (checkpoint loading,
    /// tests). Shapes must match the adjacency and config.
    static GILayer restore(SparseAdjacency adj, const GILayerConfig& cfg,
                           GILayerParams params);

    /// Layer action on a batch (M, n1, K) -> (M, n2, F), or (M, n2, 1) when
    /// pooling is configured. Pass `trace` to capture pre-activations for a
    /// later backward; inference calls leave it null.
    BatchTensor forward(const BatchTensor& x, ForwardTrace* trace = nullptr) const;

    /// Reverse-mode gradients. `grad_out` is the loss gradient with respect
    /// to this layer's actual output (pooled shape when pooling is on).
    /// Recomputes the forward trace when none is supplied.
    LayerGradients backward(const BatchTensor& x, const BatchTensor& grad_out,
                            const ForwardTrace* trace = nullptr) const;

    const GILayerConfig& config() const { return config_; }
    const GILayerParams& params() const { return params_; }
    GILayerParams& params() { return params_; }

    const SparseAdjacency& adjacency() const { return adjacency_; }
    const SparseAdjacency& augmented_adjacency() const { return augmented_; }

    int input_nodes() const { return augmented_.rows(); }
    int output_nodes() const { return augmented_.cols(); }
    int num_features() const { return params_.num_features; }
    int num_filters() const { return config_.num_filters; }
    /// Feature count of the produced batch: F, or 1 after pooling.
    int output_features() const { return config_.pool ? 1 : config_.num_filters; }

private:
    GILayer(SparseAdjacency adj, SparseAdjacency augmented, GILayerConfig cfg,
            GILayerParams params)
        : adjacency_(std::move(adj)), augmented_(std::move(augmented)),
          config_(cfg), params_(std::move(params)) {}

    Tensor3 pre_activation(const BatchTensor& x) const;

    SparseAdjacency adjacency_;  // A|_{V1,V2} as given
    SparseAdjacency augmented_;  // (A + lambda*I)|_{V1,V2}
    GILayerConfig config_;
    GILayerParams params_;
};

/// The one-feature, unit-self-loop special case acting on a square
/// full-graph adjacency: sigma((diag(w)(A + I))^T x + b).
std::vector<double> simple_form_forward(const SparseAdjacency& adj,
                                        std::span<const double> w,
                                        std::span<const double> b,
                                        Activation activation,
                                        std::span<const double> x);

} // namespace ginn
