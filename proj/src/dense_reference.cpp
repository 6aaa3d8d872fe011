#include "ginn/dense_reference.hpp"

#include <string>

namespace ginn {

DenseGITensor assemble_w_tilde(const SparseAdjacency& adj, double selfloop_value,
                               const GILayerParams& params) {
    const int n1 = adj.rows();
    const int n2 = adj.cols();
    const int feats = params.num_features;
    const int filters = params.weights.dim1();
    if (params.weights.dim0() != feats || params.weights.dim2() != n1)
        throw ShapeError("weights shape " + shape_string(params.weights) +
                         " inconsistent with K=" + std::to_string(feats) +
                         ", n1=" + std::to_string(n1));
    if (params.bias.rows() != n2 || params.bias.cols() != filters)
        throw ShapeError("bias shape (" + std::to_string(params.bias.rows()) + ", " +
                         std::to_string(params.bias.cols()) + ") inconsistent with n2=" +
                         std::to_string(n2) + ", F=" + std::to_string(filters));

    const Matrix a_hat = add_scaled_selfloops(adj, selfloop_value).densify();

    DenseGITensor wt;
    wt.n1 = n1;
    wt.num_features = feats;
    wt.num_filters = filters;
    wt.n2 = n2;
    wt.data = Tensor3(n1 * feats, filters, n2, 0.0);
    for (int l = 0; l < filters; ++l)
        for (int k = 0; k < feats; ++k)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    wt.data(k * n1 + i, l, j) = params.weights(k, l, i) * a_hat(i, j);
    return wt;
}

BatchTensor forward_dense(const DenseGITensor& w_tilde, const BatchTensor& x,
                          const Matrix& bias, Activation activation,
                          std::optional<Pool> pool) {
    const int batch = x.dim0();
    const int n1 = w_tilde.n1;
    const int feats = w_tilde.num_features;
    const int filters = w_tilde.num_filters;
    const int n2 = w_tilde.n2;
    if (x.dim1() != n1 || x.dim2() != feats)
        throw ShapeError("dense forward: input " + shape_string(x) + " does not match (n1=" +
                         std::to_string(n1) + ", K=" + std::to_string(feats) + ")");
    if (bias.rows() != n2 || bias.cols() != filters)
        throw ShapeError("dense forward: bias does not match (n2, F)");

    Tensor3 y(batch, n2, filters, 0.0);
    std::vector<double> xt(static_cast<std::size_t>(n1) * feats);
    for (int m = 0; m < batch; ++m) {
        // vertcat(X_m): column stacking, (i, k) -> k*n1 + i.
        for (int k = 0; k < feats; ++k)
            for (int i = 0; i < n1; ++i)
                xt[static_cast<std::size_t>(k) * n1 + i] = x(m, i, k);
        for (int l = 0; l < filters; ++l) {
            for (int j = 0; j < n2; ++j) {
                double acc = 0.0;
                for (std::size_t r = 0; r < xt.size(); ++r)
                    acc += w_tilde.data(static_cast<int>(r), l, j) * xt[r];
                y(m, j, l) = apply_activation(activation, acc + bias(j, l));
            }
        }
    }

    if (!pool) return y;

    Tensor3 pooled(batch, n2, 1, 0.0);
    for (int m = 0; m < batch; ++m) {
        for (int j = 0; j < n2; ++j) {
            double r = 0.0;
            switch (*pool) {
            case Pool::mean:
                for (int l = 0; l < filters; ++l) r += y(m, j, l);
                r /= filters;
                break;
            case Pool::sum:
                for (int l = 0; l < filters; ++l) r += y(m, j, l);
                break;
            case Pool::max:
                r = y(m, j, 0);
                for (int l = 1; l < filters; ++l)
                    if (y(m, j, l) > r) r = y(m, j, l);
                break;
            }
            pooled(m, j, 0) = r;
        }
    }
    return pooled;
}

Matrix constrained_dense_equivalence(const SparseAdjacency& adj,
                                     std::span<const double> w) {
    if (adj.rows() != adj.cols())
        throw ShapeError("constrained dense view needs a square full-graph adjacency");
    const int n = adj.rows();
    if (static_cast<int>(w.size()) != n)
        throw ShapeError("w must have length " + std::to_string(n));

    const Matrix a = adj.densify();
    Matrix out(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) != 0.0 || i == j)
                out(i, j) = w[static_cast<std::size_t>(i)];
    return out;
}

std::size_t dense_memory_count(int n1, int n2, int num_features, int num_filters) {
    return static_cast<std::size_t>(n1) * num_features * num_filters * n2;
}

std::size_t sparse_memory_count(std::size_t nnz, int n1, int n2, int num_features,
                                int num_filters) {
    return 2 * nnz + static_cast<std::size_t>(n1) * num_features * num_filters +
           static_cast<std::size_t>(n2) * num_filters;
}

} // namespace ginn
