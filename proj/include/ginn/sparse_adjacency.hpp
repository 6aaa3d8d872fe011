#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ginn/errors.hpp"
#include "ginn/tensor.hpp"

namespace ginn {

/// One adjacency entry in global node coordinates.
struct Edge {
    int row = 0;
    int col = 0;
    double value = 1.0;
};

/// Dictionary interchange format for a (sub)adjacency matrix.
///
/// `keys` holds local (i, j) coordinates of stored entries, `values` the
/// matching values. When the matrix is a submatrix over node subsets, the
/// custom fields carry the global node indices: `rowkeys_custom[i]` is the
/// graph node behind local row i, and `keys_custom` repeats `keys`
/// translated to global indices. Absent custom fields mean local indices
/// coincide with global ones (0..n-1).
struct AdjacencyDict {
    std::vector<std::pair<int, int>> keys;
    std::vector<double> values;
    std::optional<std::vector<int>> rowkeys_custom;
    std::optional<std::vector<int>> colkeys_custom;
    std::optional<std::vector<std::pair<int, int>>> keys_custom;
};

/// Immutable sparse matrix holding A|_{V1,V2}: the restriction of an
/// adjacency matrix to rows in node subset V1 and columns in node subset V2.
///
/// Execution layout is CSR sorted by (row, col). Row/column identities of
/// the original graph are kept in row_keys/col_keys so that diagonal
/// positions (same graph node on both axes) remain identifiable after
/// restriction. Structural zeros are legal stored entries: self-loop
/// augmentation keeps the pattern stable even where values cancel.
///
/// Instances never mutate after construction; concurrent reads are safe.
class SparseAdjacency {
public:
    SparseAdjacency() = default;

    /// Builds from local-coordinate COO triples. Entries must be in-range;
    /// duplicates with conflicting values raise DuplicateEntry, exact
    /// duplicates collapse. Keys must be strictly ascending.
    static SparseAdjacency from_coo(std::vector<int> row_keys,
                                    std::vector<int> col_keys,
                                    std::span<const Edge> local_entries);

    int rows() const { return static_cast<int>(row_keys_.size()); }
    int cols() const { return static_cast<int>(col_keys_.size()); }
    int nnz() const { return static_cast<int>(values_.size()); }

    std::span<const int> row_keys() const { return row_keys_; }
    std::span<const int> col_keys() const { return col_keys_; }

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// True when row (resp. column) node indices are just 0..n-1.
    bool identity_row_keys() const;
    bool identity_col_keys() const;

    /// Stored value at local (r, c), 0.0 when the position is not stored.
    double at(int r, int c) const;
    bool stored(int r, int c) const;

    Matrix densify() const;

    bool operator==(const SparseAdjacency& other) const;

private:
    std::vector<int> row_keys_;
    std::vector<int> col_keys_;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Builds the submatrix A|_{V1,V2} from global-coordinate edges.
/// Edges outside the subsets are dropped; subsets are sorted ascending.
/// Without subsets the matrix spans 0..max index on each axis.
/// Diagonal entries (global i == j) are accepted but reported through
/// `warnings`, since adjacency matrices are expected self-loop free.
SparseAdjacency from_edge_list(std::span<const Edge> edges,
                               std::optional<std::vector<int>> row_subset = std::nullopt,
                               std::optional<std::vector<int>> col_subset = std::nullopt,
                               std::vector<std::string>* warnings = nullptr);

/// Dictionary form of the matrix, keys in CSR order. Custom key fields are
/// emitted only when needed to reconstruct the matrix exactly.
AdjacencyDict sparse2dict(const SparseAdjacency& m);

/// Inverse of sparse2dict.
SparseAdjacency from_dict(const AdjacencyDict& d);

/// Returns (A + lambda*I)|_{V1,V2}: adds lambda at every position whose
/// global row and column node coincide. Positions touched by the identity
/// are stored even when the resulting value is exactly zero.
SparseAdjacency add_scaled_selfloops(const SparseAdjacency& m, double lambda);

/// y[j, m] = sum_i  m[i, j] * scale[i] * x[i, m]; the transposed action of
/// the row-scaled matrix. Touches stored entries only, cost O(nnz * M).
Matrix transpose_apply(const SparseAdjacency& m, std::span<const double> scale,
                       const Matrix& x);

} // namespace ginn
