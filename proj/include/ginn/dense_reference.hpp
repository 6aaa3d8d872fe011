#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "ginn/gi_layer.hpp"
#include "ginn/sparse_adjacency.hpp"
#include "ginn/tensor.hpp"

namespace ginn {

/// The fully materialized stacked weight tensor W̃ of shape (n1*K, F, n2):
/// for each filter l, the K row-blocks diag(w^{(k,l)}) * Â stacked over k.
/// Deliberately dense; exists as the correctness oracle and the memory
/// baseline the sparse layer is measured against.
struct DenseGITensor {
    int n1 = 0;
    int num_features = 0;  // K
    int num_filters = 0;   // F
    int n2 = 0;
    Tensor3 data;          // (n1*K, F, n2)

    double operator()(int r, int l, int j) const { return data(r, l, j); }
};

/// Materializes W̃ from the raw adjacency, the self-loop factor, and the
/// layer parameters. Memory is n1*K*F*n2 values by construction.
DenseGITensor assemble_w_tilde(const SparseAdjacency& adj, double selfloop_value,
                               const GILayerParams& params);

/// Literal evaluation of the layer action: for each batch element,
/// Y = sigma(W̃^T vertcat(X) + B), then optional filter-axis pooling.
/// vertcat stacks columns: entry (node i, feature k) lands at index k*n1+i.
/// Triple-loop dense contraction, no sparsity exploited.
BatchTensor forward_dense(const DenseGITensor& w_tilde, const BatchTensor& x,
                          const Matrix& bias, Activation activation,
                          std::optional<Pool> pool);

/// The weight-sharing view of the simple GI layer: the full n-by-n matrix
/// with entry (i, j) equal to w[i] where a_ij != 0 or i == j, else 0.
Matrix constrained_dense_equivalence(const SparseAdjacency& adj,
                                     std::span<const double> w);

/// Value slots a dense layer stores: the n1*K*F*n2 entries of W̃.
/// (Biases add n2*F more in either implementation.)
std::size_t dense_memory_count(int n1, int n2, int num_features, int num_filters);

/// Value slots the sparse layer stores: index+value slot per stored entry
/// of Â, plus the n1*K*F weights and n2*F biases.
std::size_t sparse_memory_count(std::size_t nnz, int n1, int n2, int num_features,
                                int num_filters);

} // namespace ginn
