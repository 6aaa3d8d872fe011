#pragma once

#include <cstdint>
#include <vector>

#include "ginn/gi_layer.hpp"
#include "ginn/tensor.hpp"

namespace ginn {

enum class Loss { mse };

struct TrainConfig {
    double learning_rate = 1e-2;
    int epochs = 100;
    int batch_size = 0;       // 0 or >= sample count means full batch
    std::uint64_t seed = 0;   // drives mini-batch shuffling
    Loss loss = Loss::mse;
};

/// Ordered stack of graph-informed layers. Consecutive layers must chain:
/// layer t's (output nodes, post-pool features) feed layer t+1's
/// (input nodes, input features); add_layer rejects mismatches.
class GinnModel {
public:
    GinnModel() = default;

    void add_layer(GILayer layer);

    /// Sequential application of the layer forwards.
    BatchTensor forward(const BatchTensor& x) const;

    std::size_t layer_count() const { return layers_.size(); }
    const GILayer& layer(std::size_t index) const { return layers_.at(index); }
    GILayer& layer(std::size_t index) { return layers_.at(index); }

    int input_nodes() const;
    int input_features() const;
    int output_nodes() const;
    int output_features() const;

private:
    std::vector<GILayer> layers_;
};

/// One plain gradient-descent update: p <- p - lr * g, weights and biases.
void sgd_step(GILayerParams& params, const LayerGradients& grads, double learning_rate);

/// Gradient descent on 0.5 * mean squared error (mean over batch and output
/// entries). Returns the per-epoch training loss, measured on each batch
/// before its update. Deterministic under a fixed seed. Throws
/// DivergenceError (with the epoch index) if the loss leaves the finite
/// range.
std::vector<double> train_mse(GinnModel& model, const BatchTensor& x_train,
                              const BatchTensor& y_train, const TrainConfig& cfg);

/// 0.5 * mean((prediction - target)^2); the quantity train_mse minimizes.
double mse_half_loss(const BatchTensor& prediction, const BatchTensor& target);

} // namespace ginn
