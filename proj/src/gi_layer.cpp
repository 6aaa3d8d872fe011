#include "ginn/gi_layer.hpp"

#include <cmath>

#include "ginn/rng.hpp"

namespace ginn {

std::string to_string(Pool pool) {
    switch (pool) {
    case Pool::mean: return "mean";
    case Pool::max: return "max";
    case Pool::sum: return "sum";
    }
    return "unknown";
}

Pool pool_from_string(const std::string& name) {
    if (name == "mean") return Pool::mean;
    if (name == "max") return Pool::max;
    if (name == "sum") return Pool::sum;
    throw InvalidValue("unknown pool \"" + name + "\"");
}

GILayer GILayer::build(SparseAdjacency adj, const GILayerConfig& cfg,
                       int num_features, std::uint64_t init_seed) {
    if (adj.rows() == 0 || adj.cols() == 0)
        throw ShapeError("cannot build a layer on an empty adjacency (" +
                         std::to_string(adj.rows()) + "x" + std::to_string(adj.cols()) + ")");
    if (num_features < 1)
        throw ShapeError("num_features must be >= 1, got " + std::to_string(num_features));
    if (cfg.num_filters < 1)
        throw ShapeError("num_filters must be >= 1, got " + std::to_string(cfg.num_filters));
    if (!std::isfinite(cfg.selfloop_value))
        throw InvalidValue("selfloop_value must be finite");

    const int n1 = adj.rows();
    const int n2 = adj.cols();
    const int filters = cfg.num_filters;

    SparseAdjacency augmented = add_scaled_selfloops(adj, cfg.selfloop_value);

    GILayerParams params;
    params.num_features = num_features;
    params.weights = Tensor3(num_features, filters, n1);
    params.bias = Matrix(n2, filters, 0.0);

    // Glorot-style uniform init with fan_in = n1*K, fan_out = n2*F.
    const double s = std::sqrt(6.0 / (static_cast<double>(n1) * num_features +
                                      static_cast<double>(n2) * filters));
    std::mt19937_64 rng(init_seed);
    for (double& w : params.weights.data())
        w = uniform(rng, -s, s);

    return GILayer(std::move(adj), std::move(augmented), cfg, std::move(params));
}

GILayer GILayer::restore(SparseAdjacency adj, const GILayerConfig& cfg,
                         GILayerParams params) {
    if (adj.rows() == 0 || adj.cols() == 0)
        throw ShapeError("cannot restore a layer on an empty adjacency");
    if (!std::isfinite(cfg.selfloop_value))
        throw InvalidValue("selfloop_value must be finite");
    if (params.num_features < 1 || cfg.num_filters < 1)
        throw ShapeError("restore: K and F must be >= 1");
    if (params.weights.dim0() != params.num_features ||
        params.weights.dim1() != cfg.num_filters || params.weights.dim2() != adj.rows())
        throw ShapeError("restore: weights shape " + shape_string(params.weights) +
                         " does not match (K=" + std::to_string(params.num_features) +
                         ", F=" + std::to_string(cfg.num_filters) +
                         ", n1=" + std::to_string(adj.rows()) + ")");
    if (params.bias.rows() != adj.cols() || params.bias.cols() != cfg.num_filters)
        throw ShapeError("restore: bias shape does not match (n2, F)");
    if (!all_finite(params.weights.data()) || !all_finite(params.bias.data()))
        throw InvalidValue("restore: non-finite parameter value");

    SparseAdjacency augmented = add_scaled_selfloops(adj, cfg.selfloop_value);
    return GILayer(std::move(adj), std::move(augmented), cfg, std::move(params));
}

Tensor3 GILayer::pre_activation(const BatchTensor& x) const {
    const int batch = x.dim0();
    const int n1 = input_nodes();
    const int n2 = output_nodes();
    const int feats = num_features();
    const int filters = config_.num_filters;

    const auto row_ptr = augmented_.row_ptr();
    const auto col_idx = augmented_.col_idx();
    const auto values = augmented_.values();

    Tensor3 z(batch, n2, filters, 0.0);
    std::vector<double> scaled(static_cast<std::size_t>(batch));
    for (int l = 0; l < filters; ++l) {
        for (int i = 0; i < n1; ++i) {
            const int begin = row_ptr[i];
            const int end = row_ptr[static_cast<std::size_t>(i) + 1];
            if (begin == end) continue; // nodes without stored entries never touch the output
            for (int m = 0; m < batch; ++m) {
                double acc = 0.0;
                for (int k = 0; k < feats; ++k)
                    acc += params_.weights(k, l, i) * x(m, i, k);
                scaled[static_cast<std::size_t>(m)] = acc;
            }
            for (int p = begin; p < end; ++p) {
                const int j = col_idx[p];
                const double v = values[p];
                for (int m = 0; m < batch; ++m)
                    z(m, j, l) += v * scaled[static_cast<std::size_t>(m)];
            }
        }
    }
    if (config_.use_bias) {
        for (int m = 0; m < batch; ++m)
            for (int j = 0; j < n2; ++j)
                for (int l = 0; l < filters; ++l)
                    z(m, j, l) += params_.bias(j, l);
    }
    return z;
}

BatchTensor GILayer::forward(const BatchTensor& x, ForwardTrace* trace) const {
    if (x.dim1() != input_nodes())
        throw ShapeError("input has " + std::to_string(x.dim1()) + " nodes, layer expects " +
                         std::to_string(input_nodes()));
    if (x.dim2() != num_features())
        throw ShapeError("input has " + std::to_string(x.dim2()) + " features, layer expects " +
                         std::to_string(num_features()));
    if (!all_finite(x.data()))
        throw InvalidValue("non-finite value in layer input");

    const int batch = x.dim0();
    const int n2 = output_nodes();
    const int filters = config_.num_filters;

    Tensor3 z = pre_activation(x);
    if (trace) trace->pre_activation = z;

    Tensor3 y = z;
    apply_activation(config_.activation, y.data());

    if (!config_.pool) return y;

    if (trace) trace->max_filter.assign(static_cast<std::size_t>(batch) * n2, 0);
    Tensor3 pooled(batch, n2, 1, 0.0);
    for (int m = 0; m < batch; ++m) {
        for (int j = 0; j < n2; ++j) {
            double r = 0.0;
            switch (*config_.pool) {
            case Pool::mean:
            case Pool::sum: {
                r = 0.0;
                for (int l = 0; l < filters; ++l) r += y(m, j, l);
                if (*config_.pool == Pool::mean) r /= filters;
                break;
            }
            case Pool::max: {
                int best = 0;
                r = y(m, j, 0);
                for (int l = 1; l < filters; ++l) {
                    if (y(m, j, l) > r) { // strict: ties keep the lowest index
                        r = y(m, j, l);
                        best = l;
                    }
                }
                if (trace)
                    trace->max_filter[static_cast<std::size_t>(m) * n2 + j] = best;
                break;
            }
            }
            pooled(m, j, 0) = r;
        }
    }
    return pooled;
}

LayerGradients GILayer::backward(const BatchTensor& x, const BatchTensor& grad_out,
                                 const ForwardTrace* trace) const {
    if (x.dim1() != input_nodes() || x.dim2() != num_features())
        throw ShapeError("backward: input shape " + shape_string(x) + " does not match layer (" +
                         std::to_string(input_nodes()) + " nodes, " +
                         std::to_string(num_features()) + " features)");
    const int batch = x.dim0();
    const int n2 = output_nodes();
    const int filters = config_.num_filters;
    if (grad_out.dim0() != batch || grad_out.dim1() != n2 ||
        grad_out.dim2() != output_features())
        throw ShapeError("backward: grad_out shape " + shape_string(grad_out) +
                         " does not match output (" + std::to_string(batch) + ", " +
                         std::to_string(n2) + ", " + std::to_string(output_features()) + ")");

    ForwardTrace recomputed;
    if (!trace || trace->pre_activation.size() == 0) {
        forward(x, &recomputed);
        trace = &recomputed;
    }
    const Tensor3& z = trace->pre_activation;

    // delta = dLoss/dZ: pooling fan-out composed first, then the activation
    // derivative at the pre-activation.
    Tensor3 delta(batch, n2, filters, 0.0);
    for (int m = 0; m < batch; ++m) {
        for (int j = 0; j < n2; ++j) {
            for (int l = 0; l < filters; ++l) {
                double g;
                if (!config_.pool) {
                    g = grad_out(m, j, l);
                } else {
                    const double upstream = grad_out(m, j, 0);
                    switch (*config_.pool) {
                    case Pool::mean: g = upstream / filters; break;
                    case Pool::sum: g = upstream; break;
                    case Pool::max:
                        g = trace->max_filter[static_cast<std::size_t>(m) * n2 + j] == l
                                ? upstream
                                : 0.0;
                        break;
                    default: g = 0.0; break;
                    }
                }
                delta(m, j, l) = g * activation_derivative(config_.activation, z(m, j, l));
            }
        }
    }

    LayerGradients grads;
    grads.weights = Tensor3(num_features(), filters, input_nodes(), 0.0);
    grads.bias = Matrix(n2, filters, 0.0);
    grads.input = Tensor3(batch, input_nodes(), num_features(), 0.0);

    if (config_.use_bias) {
        for (int m = 0; m < batch; ++m)
            for (int j = 0; j < n2; ++j)
                for (int l = 0; l < filters; ++l)
                    grads.bias(j, l) += delta(m, j, l);
    }

    const auto row_ptr = augmented_.row_ptr();
    const auto col_idx = augmented_.col_idx();
    const auto values = augmented_.values();

    // t[m] = sum_j Â[i,j] * delta[m,j,l] feeds both the weight and the
    // input gradient for row i and filter l.
    std::vector<double> t(static_cast<std::size_t>(batch));
    for (int l = 0; l < filters; ++l) {
        for (int i = 0; i < input_nodes(); ++i) {
            const int begin = row_ptr[i];
            const int end = row_ptr[static_cast<std::size_t>(i) + 1];
            if (begin == end) continue;
            std::fill(t.begin(), t.end(), 0.0);
            for (int p = begin; p < end; ++p) {
                const int j = col_idx[p];
                const double v = values[p];
                for (int m = 0; m < batch; ++m)
                    t[static_cast<std::size_t>(m)] += v * delta(m, j, l);
            }
            for (int k = 0; k < num_features(); ++k) {
                double gw = 0.0;
                for (int m = 0; m < batch; ++m)
                    gw += x(m, i, k) * t[static_cast<std::size_t>(m)];
                grads.weights(k, l, i) = gw;
                const double w = params_.weights(k, l, i);
                for (int m = 0; m < batch; ++m)
                    grads.input(m, i, k) += w * t[static_cast<std::size_t>(m)];
            }
        }
    }
    return grads;
}

std::vector<double> simple_form_forward(const SparseAdjacency& adj,
                                        std::span<const double> w,
                                        std::span<const double> b,
                                        Activation activation,
                                        std::span<const double> x) {
    if (adj.rows() != adj.cols())
        throw ShapeError("simple form needs a square adjacency, got " +
                         std::to_string(adj.rows()) + "x" + std::to_string(adj.cols()));
    if (!std::equal(adj.row_keys().begin(), adj.row_keys().end(), adj.col_keys().begin()))
        throw ShapeError("simple form needs V1 == V2");
    const int n = adj.rows();
    if (static_cast<int>(w.size()) != n || static_cast<int>(b.size()) != n ||
        static_cast<int>(x.size()) != n)
        throw ShapeError("simple form: w, b, x must all have length " + std::to_string(n));

    const SparseAdjacency augmented = add_scaled_selfloops(adj, 1.0);
    Matrix xm(n, 1);
    for (int i = 0; i < n; ++i) xm(i, 0) = x[static_cast<std::size_t>(i)];
    Matrix ym = transpose_apply(augmented, w, xm);

    std::vector<double> y(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        y[static_cast<std::size_t>(j)] =
            apply_activation(activation, ym(j, 0) + b[static_cast<std::size_t>(j)]);
    return y;
}

} // namespace ginn
