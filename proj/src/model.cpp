#include "ginn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ginn/rng.hpp"

namespace ginn {

void GinnModel::add_layer(GILayer layer) {
    if (!layers_.empty()) {
        const GILayer& prev = layers_.back();
        if (prev.output_nodes() != layer.input_nodes() ||
            prev.output_features() != layer.num_features())
            throw ShapeError("layer " + std::to_string(layers_.size()) +
                             " expects (" + std::to_string(layer.input_nodes()) + " nodes, " +
                             std::to_string(layer.num_features()) + " features) but layer " +
                             std::to_string(layers_.size() - 1) + " produces (" +
                             std::to_string(prev.output_nodes()) + ", " +
                             std::to_string(prev.output_features()) + ")");
    }
    layers_.push_back(std::move(layer));
}

BatchTensor GinnModel::forward(const BatchTensor& x) const {
    if (layers_.empty())
        throw ShapeError("model has no layers");
    BatchTensor current = x;
    for (std::size_t t = 0; t < layers_.size(); ++t) {
        try {
            current = layers_[t].forward(current);
        } catch (const ShapeError& e) {
            throw ShapeError("layer " + std::to_string(t) + ": " + e.what());
        }
    }
    return current;
}

int GinnModel::input_nodes() const { return layers_.front().input_nodes(); }
int GinnModel::input_features() const { return layers_.front().num_features(); }
int GinnModel::output_nodes() const { return layers_.back().output_nodes(); }
int GinnModel::output_features() const { return layers_.back().output_features(); }

void sgd_step(GILayerParams& params, const LayerGradients& grads, double learning_rate) {
    if (!params.weights.same_shape(grads.weights) || !params.bias.same_shape(grads.bias))
        throw ShapeError("sgd_step: gradient shapes do not match parameters");
    auto w = params.weights.data();
    auto gw = grads.weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
    auto b = params.bias.data();
    auto gb = grads.bias.data();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= learning_rate * gb[i];
}

double mse_half_loss(const BatchTensor& prediction, const BatchTensor& target) {
    if (!prediction.same_shape(target))
        throw ShapeError("loss: prediction " + shape_string(prediction) + " vs target " +
                         shape_string(target));
    const auto p = prediction.data();
    const auto t = target.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p[i] - t[i];
        acc += 0.5 * r * r;
    }
    return p.empty() ? 0.0 : acc / static_cast<double>(p.size());
}

namespace {

BatchTensor gather_samples(const BatchTensor& data, std::span<const int> indices) {
    BatchTensor out(static_cast<int>(indices.size()), data.dim1(), data.dim2());
    for (std::size_t s = 0; s < indices.size(); ++s)
        for (int i = 0; i < data.dim1(); ++i)
            for (int k = 0; k < data.dim2(); ++k)
                out(static_cast<int>(s), i, k) = data(indices[s], i, k);
    return out;
}

// Forward through the whole stack keeping per-layer inputs and traces, then
// backpropagate the loss gradient and apply one SGD update per layer.
// Returns the pre-update half-MSE of this batch.
double train_batch(GinnModel& model, const BatchTensor& xb, const BatchTensor& yb,
                   double learning_rate) {
    const std::size_t depth = model.layer_count();
    std::vector<BatchTensor> inputs(depth);
    std::vector<ForwardTrace> traces(depth);

    BatchTensor current = xb;
    for (std::size_t t = 0; t < depth; ++t) {
        inputs[t] = current;
        current = model.layer(t).forward(inputs[t], &traces[t]);
    }
    const double loss = mse_half_loss(current, yb);

    // d(0.5*mean(r^2))/d(pred) = r / count
    BatchTensor grad = current;
    {
        auto g = grad.data();
        const auto t = yb.data();
        const double inv_count = g.empty() ? 0.0 : 1.0 / static_cast<double>(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] = (g[i] - t[i]) * inv_count;
    }

    for (std::size_t t = depth; t-- > 0;) {
        LayerGradients grads = model.layer(t).backward(inputs[t], grad, &traces[t]);
        sgd_step(model.layer(t).params(), grads, learning_rate);
        grad = std::move(grads.input);
    }
    return loss;
}

} // namespace

std::vector<double> train_mse(GinnModel& model, const BatchTensor& x_train,
                              const BatchTensor& y_train, const TrainConfig& cfg) {
    if (model.layer_count() == 0)
        throw ShapeError("train: model has no layers");
    const int samples = x_train.dim0();
    if (samples < 1)
        throw ShapeError("train: need at least one sample");
    if (y_train.dim0() != samples)
        throw ShapeError("train: " + std::to_string(samples) + " inputs vs " +
                         std::to_string(y_train.dim0()) + " targets");
    if (x_train.dim1() != model.input_nodes() || x_train.dim2() != model.input_features())
        throw ShapeError("train: input shape " + shape_string(x_train) +
                         " does not match model input (" + std::to_string(model.input_nodes()) +
                         " nodes, " + std::to_string(model.input_features()) + " features)");
    if (y_train.dim1() != model.output_nodes() || y_train.dim2() != model.output_features())
        throw ShapeError("train: target shape " + shape_string(y_train) +
                         " does not match model output (" + std::to_string(model.output_nodes()) +
                         " nodes, " + std::to_string(model.output_features()) + " features)");
    if (!std::isfinite(cfg.learning_rate) || cfg.learning_rate < 0.0)
        throw InvalidValue("learning_rate must be finite and non-negative");
    if (cfg.epochs < 0)
        throw InvalidValue("epochs must be non-negative");

    const bool full_batch = cfg.batch_size <= 0 || cfg.batch_size >= samples;
    std::mt19937_64 rng(cfg.seed);

    std::vector<int> order(static_cast<std::size_t>(samples));
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        if (full_batch) {
            epoch_loss = train_batch(model, x_train, y_train, cfg.learning_rate);
        } else {
            // Fisher-Yates with the library's own uniform draw, so shuffles
            // are reproducible across standard libraries.
            for (int i = samples - 1; i > 0; --i)
                std::swap(order[static_cast<std::size_t>(i)],
                          order[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
            for (int start = 0; start < samples; start += cfg.batch_size) {
                const int stop = std::min(start + cfg.batch_size, samples);
                const std::span<const int> batch_ids(order.data() + start,
                                                     static_cast<std::size_t>(stop - start));
                const BatchTensor xb = gather_samples(x_train, batch_ids);
                const BatchTensor yb = gather_samples(y_train, batch_ids);
                epoch_loss += train_batch(model, xb, yb, cfg.learning_rate) *
                              static_cast<double>(stop - start);
            }
            epoch_loss /= static_cast<double>(samples);
        }
        if (!std::isfinite(epoch_loss))
            throw DivergenceError("training loss diverged at epoch " + std::to_string(epoch),
                                  epoch);
        history.push_back(epoch_loss);
    }
    return history;
}

} // namespace ginn
