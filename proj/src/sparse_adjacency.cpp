#include "ginn/sparse_adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ginn {

namespace {

bool strictly_ascending(std::span<const int> xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i - 1] >= xs[i]) return false;
    return true;
}

std::vector<int> iota_keys(int n) {
    std::vector<int> keys(static_cast<std::size_t>(n));
    std::iota(keys.begin(), keys.end(), 0);
    return keys;
}

// Sorts COO triples by (row, col), collapses exact duplicates, rejects
// conflicting ones.
void normalize_coo(std::vector<Edge>& coo) {
    std::sort(coo.begin(), coo.end(), [](const Edge& a, const Edge& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Edge> out;
    out.reserve(coo.size());
    for (const Edge& e : coo) {
        if (!out.empty() && out.back().row == e.row && out.back().col == e.col) {
            if (out.back().value != e.value)
                throw DuplicateEntry("duplicate entry (" + std::to_string(e.row) + ", " +
                                     std::to_string(e.col) + ") with conflicting values");
            continue;
        }
        out.push_back(e);
    }
    coo = std::move(out);
}

} // namespace

SparseAdjacency SparseAdjacency::from_coo(std::vector<int> row_keys,
                                          std::vector<int> col_keys,
                                          std::span<const Edge> local_entries) {
    if (!strictly_ascending(row_keys))
        throw MalformedDict("row keys must be strictly ascending");
    if (!strictly_ascending(col_keys))
        throw MalformedDict("col keys must be strictly ascending");

    const int n1 = static_cast<int>(row_keys.size());
    const int n2 = static_cast<int>(col_keys.size());

    std::vector<Edge> coo(local_entries.begin(), local_entries.end());
    for (const Edge& e : coo) {
        if (e.row < 0 || e.row >= n1 || e.col < 0 || e.col >= n2)
            throw ShapeError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                             ") outside " + std::to_string(n1) + "x" + std::to_string(n2));
        if (!std::isfinite(e.value))
            throw InvalidValue("non-finite value at (" + std::to_string(e.row) + ", " +
                               std::to_string(e.col) + ")");
    }
    normalize_coo(coo);

    SparseAdjacency m;
    m.row_keys_ = std::move(row_keys);
    m.col_keys_ = std::move(col_keys);
    m.row_ptr_.assign(static_cast<std::size_t>(n1) + 1, 0);
    m.col_idx_.reserve(coo.size());
    m.values_.reserve(coo.size());
    for (const Edge& e : coo) {
        ++m.row_ptr_[static_cast<std::size_t>(e.row) + 1];
        m.col_idx_.push_back(e.col);
        m.values_.push_back(e.value);
    }
    for (int i = 0; i < n1; ++i)
        m.row_ptr_[static_cast<std::size_t>(i) + 1] += m.row_ptr_[i];
    return m;
}

bool SparseAdjacency::identity_row_keys() const {
    for (int i = 0; i < rows(); ++i)
        if (row_keys_[static_cast<std::size_t>(i)] != i) return false;
    return true;
}

bool SparseAdjacency::identity_col_keys() const {
    for (int j = 0; j < cols(); ++j)
        if (col_keys_[static_cast<std::size_t>(j)] != j) return false;
    return true;
}

double SparseAdjacency::at(int r, int c) const {
    if (r < 0 || r >= rows() || c < 0 || c >= cols())
        throw ShapeError("at(" + std::to_string(r) + ", " + std::to_string(c) + ") out of range");
    const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r)];
    const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r) + 1];
    const auto it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

bool SparseAdjacency::stored(int r, int c) const {
    if (r < 0 || r >= rows() || c < 0 || c >= cols()) return false;
    const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r)];
    const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r) + 1];
    return std::binary_search(begin, end, c);
}

Matrix SparseAdjacency::densify() const {
    Matrix dense(rows(), cols(), 0.0);
    for (int i = 0; i < rows(); ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p)
            dense(i, col_idx_[p]) = values_[p];
    return dense;
}

bool SparseAdjacency::operator==(const SparseAdjacency& other) const {
    return row_keys_ == other.row_keys_ && col_keys_ == other.col_keys_ &&
           row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_ &&
           values_ == other.values_;
}

SparseAdjacency from_edge_list(std::span<const Edge> edges,
                               std::optional<std::vector<int>> row_subset,
                               std::optional<std::vector<int>> col_subset,
                               std::vector<std::string>* warnings) {
    for (const Edge& e : edges) {
        if (e.row < 0 || e.col < 0)
            throw InvalidValue("negative node index in edge (" + std::to_string(e.row) + ", " +
                               std::to_string(e.col) + ")");
        if (!std::isfinite(e.value))
            throw InvalidValue("non-finite value on edge (" + std::to_string(e.row) + ", " +
                               std::to_string(e.col) + ")");
    }

    auto prepare_subset = [](std::vector<int> subset, const char* which) {
        std::sort(subset.begin(), subset.end());
        if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
            throw InvalidValue(std::string(which) + " contains duplicate node indices");
        if (!subset.empty() && subset.front() < 0)
            throw InvalidValue(std::string(which) + " contains a negative node index");
        return subset;
    };

    std::vector<int> row_keys;
    std::vector<int> col_keys;
    if (row_subset) {
        row_keys = prepare_subset(std::move(*row_subset), "row_subset");
    } else {
        int max_row = -1;
        for (const Edge& e : edges) max_row = std::max(max_row, e.row);
        row_keys = iota_keys(max_row + 1);
    }
    if (col_subset) {
        col_keys = prepare_subset(std::move(*col_subset), "col_subset");
    } else {
        int max_col = -1;
        for (const Edge& e : edges) max_col = std::max(max_col, e.col);
        col_keys = iota_keys(max_col + 1);
    }

    auto local_of = [](const std::vector<int>& keys, int global) -> int {
        const auto it = std::lower_bound(keys.begin(), keys.end(), global);
        if (it == keys.end() || *it != global) return -1;
        return static_cast<int>(it - keys.begin());
    };

    std::vector<Edge> local;
    local.reserve(edges.size());
    int diagonal_count = 0;
    for (const Edge& e : edges) {
        const int li = local_of(row_keys, e.row);
        const int lj = local_of(col_keys, e.col);
        if (li < 0 || lj < 0) continue; // outside the restriction
        if (e.row == e.col) ++diagonal_count;
        local.push_back({li, lj, e.value});
    }
    if (diagonal_count > 0 && warnings)
        warnings->push_back("adjacency has " + std::to_string(diagonal_count) +
                            " diagonal entr" + (diagonal_count == 1 ? "y" : "ies") +
                            "; graphs are expected self-loop free");

    return SparseAdjacency::from_coo(std::move(row_keys), std::move(col_keys), local);
}

AdjacencyDict sparse2dict(const SparseAdjacency& m) {
    AdjacencyDict d;
    d.keys.reserve(static_cast<std::size_t>(m.nnz()));
    d.values.assign(m.values().begin(), m.values().end());

    int max_row = -1;
    int max_col = -1;
    for (int i = 0; i < m.rows(); ++i) {
        for (int p = m.row_ptr()[i]; p < m.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const int j = m.col_idx()[p];
            d.keys.emplace_back(i, j);
            max_row = std::max(max_row, i);
            max_col = std::max(max_col, j);
        }
    }

    // Local keys alone pin down the matrix only when the node indices are
    // 0..n-1 and the extreme row/column actually appear; otherwise emit the
    // custom fields so from_dict restores dimensions and identities.
    const bool dims_recoverable = max_row == m.rows() - 1 && max_col == m.cols() - 1;
    if (!(m.identity_row_keys() && m.identity_col_keys() && dims_recoverable)) {
        d.rowkeys_custom = std::vector<int>(m.row_keys().begin(), m.row_keys().end());
        d.colkeys_custom = std::vector<int>(m.col_keys().begin(), m.col_keys().end());
        d.keys_custom = std::vector<std::pair<int, int>>();
        d.keys_custom->reserve(d.keys.size());
        for (const auto& [i, j] : d.keys)
            d.keys_custom->emplace_back(m.row_keys()[i], m.col_keys()[j]);
    }
    return d;
}

SparseAdjacency from_dict(const AdjacencyDict& d) {
    if (d.keys.size() != d.values.size())
        throw MalformedDict("keys/values length mismatch: " + std::to_string(d.keys.size()) +
                            " vs " + std::to_string(d.values.size()));
    if (d.keys_custom && d.keys_custom->size() != d.keys.size())
        throw MalformedDict("keys_custom length differs from keys");

    int n1 = 0;
    int n2 = 0;
    if (d.rowkeys_custom) {
        n1 = static_cast<int>(d.rowkeys_custom->size());
    } else {
        for (const auto& [i, j] : d.keys) n1 = std::max(n1, i + 1);
    }
    if (d.colkeys_custom) {
        n2 = static_cast<int>(d.colkeys_custom->size());
    } else {
        for (const auto& [i, j] : d.keys) n2 = std::max(n2, j + 1);
    }

    std::vector<int> row_keys = d.rowkeys_custom ? *d.rowkeys_custom : iota_keys(n1);
    std::vector<int> col_keys = d.colkeys_custom ? *d.colkeys_custom : iota_keys(n2);

    std::vector<Edge> local;
    local.reserve(d.keys.size());
    for (std::size_t t = 0; t < d.keys.size(); ++t) {
        const auto [i, j] = d.keys[t];
        if (i < 0 || i >= n1 || j < 0 || j >= n2)
            throw MalformedDict("key (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") outside " + std::to_string(n1) + "x" + std::to_string(n2));
        if (d.keys_custom) {
            const auto [gi, gj] = (*d.keys_custom)[t];
            if (gi != row_keys[static_cast<std::size_t>(i)] ||
                gj != col_keys[static_cast<std::size_t>(j)])
                throw MalformedDict("keys_custom entry " + std::to_string(t) +
                                    " does not translate the matching key");
        }
        if (!std::isfinite(d.values[t]))
            throw InvalidValue("non-finite value at dict position " + std::to_string(t));
        local.push_back({i, j, d.values[t]});
    }

    try {
        return SparseAdjacency::from_coo(std::move(row_keys), std::move(col_keys), local);
    } catch (const DuplicateEntry&) {
        throw MalformedDict("dictionary repeats a (i, j) key with conflicting values");
    }
}

SparseAdjacency add_scaled_selfloops(const SparseAdjacency& m, double lambda) {
    if (!std::isfinite(lambda))
        throw InvalidValue("self-loop rescaling factor must be finite");

    std::vector<Edge> coo;
    coo.reserve(static_cast<std::size_t>(m.nnz()) + m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int p = m.row_ptr()[i]; p < m.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p)
            coo.push_back({i, m.col_idx()[p], m.values()[p]});

    // The identity contributes where the same graph node indexes both axes:
    // row_keys[i] == col_keys[j], located by binary search over the sorted
    // column keys. Touched positions stay stored even at value 0 so the
    // pattern is stable across lambda choices. The first nnz entries of coo
    // are still in CSR order, so each row slice is searchable; new diagonal
    // positions are appended and re-sorted by from_coo.
    for (int i = 0; i < m.rows(); ++i) {
        const int g = m.row_keys()[i];
        const auto key_it = std::lower_bound(m.col_keys().begin(), m.col_keys().end(), g);
        if (key_it == m.col_keys().end() || *key_it != g) continue;
        const int j = static_cast<int>(key_it - m.col_keys().begin());
        const auto begin = coo.begin() + m.row_ptr()[i];
        const auto end = coo.begin() + m.row_ptr()[static_cast<std::size_t>(i) + 1];
        const auto it = std::lower_bound(begin, end, j,
                                         [](const Edge& e, int col) { return e.col < col; });
        if (it != end && it->col == j)
            it->value += lambda;
        else
            coo.push_back({i, j, lambda});
    }

    std::vector<int> row_keys(m.row_keys().begin(), m.row_keys().end());
    std::vector<int> col_keys(m.col_keys().begin(), m.col_keys().end());
    return SparseAdjacency::from_coo(std::move(row_keys), std::move(col_keys), coo);
}

Matrix transpose_apply(const SparseAdjacency& m, std::span<const double> scale,
                       const Matrix& x) {
    if (static_cast<int>(scale.size()) != m.rows())
        throw ShapeError("scale length " + std::to_string(scale.size()) + " != n_rows " +
                         std::to_string(m.rows()));
    if (x.rows() != m.rows())
        throw ShapeError("x has " + std::to_string(x.rows()) + " rows, expected " +
                         std::to_string(m.rows()));

    const int batch = x.cols();
    Matrix y(m.cols(), batch, 0.0);
    std::vector<double> scaled(static_cast<std::size_t>(batch));
    for (int i = 0; i < m.rows(); ++i) {
        const int begin = m.row_ptr()[i];
        const int end = m.row_ptr()[static_cast<std::size_t>(i) + 1];
        if (begin == end) continue;
        const double s = scale[static_cast<std::size_t>(i)];
        for (int c = 0; c < batch; ++c)
            scaled[static_cast<std::size_t>(c)] = s * x(i, c);
        for (int p = begin; p < end; ++p) {
            const int j = m.col_idx()[p];
            const double v = m.values()[p];
            for (int c = 0; c < batch; ++c)
                y(j, c) += v * scaled[static_cast<std::size_t>(c)];
        }
    }
    return y;
}

} // namespace ginn
