#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "ginn/rng.hpp"
#include "ginn/sparse_adjacency.hpp"

using namespace ginn;

namespace {

// Path graph 0-1-2, both directions per edge.
std::vector<Edge> p3_edges() {
    return {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}};
}

bool matrix_equals(const Matrix& m, const std::vector<std::vector<double>>& want) {
    if (m.rows() != static_cast<int>(want.size())) return false;
    for (int i = 0; i < m.rows(); ++i) {
        if (m.cols() != static_cast<int>(want[i].size())) return false;
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != want[i][j]) return false;
    }
    return true;
}

// Random sparse matrix with non-trivial global keys for round-trip checks.
SparseAdjacency random_matrix(std::mt19937_64& rng, bool custom_keys) {
    const int n1 = uniform_int(rng, 1, 12);
    const int n2 = uniform_int(rng, 1, 12);
    std::vector<int> row_keys(static_cast<std::size_t>(n1));
    std::vector<int> col_keys(static_cast<std::size_t>(n2));
    if (custom_keys) {
        int next = 0;
        for (int& k : row_keys) k = (next += uniform_int(rng, 1, 3));
        next = uniform_int(rng, 0, 4);
        for (int& k : col_keys) k = (next += uniform_int(rng, 1, 3));
    } else {
        std::iota(row_keys.begin(), row_keys.end(), 0);
        std::iota(col_keys.begin(), col_keys.end(), 0);
    }
    std::vector<Edge> entries;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (uniform01(rng) < 0.3) {
                // A few exact zeros to confirm structural entries survive.
                double v = uniform01(rng) < 0.15 ? 0.0 : uniform(rng, -2.0, 2.0);
                entries.push_back({i, j, v});
            }
    return SparseAdjacency::from_coo(std::move(row_keys), std::move(col_keys), entries);
}

} // namespace

TEST_CASE("from_edge_list keeps the full matrix when no subsets are given") {
    SparseAdjacency m = from_edge_list(p3_edges());
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 3);
    CHECK(m.nnz() == 4);
    CHECK(m.at(0, 1) == 1.0);
    CHECK(m.at(1, 0) == 1.0);
    CHECK(m.at(1, 2) == 1.0);
    CHECK(m.at(2, 1) == 1.0);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.identity_row_keys());
    CHECK(m.identity_col_keys());
}

TEST_CASE("from_edge_list restricts to row and column subsets") {
    SparseAdjacency m = from_edge_list(p3_edges(), std::vector<int>{0, 1},
                                       std::vector<int>{1, 2});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.nnz() == 2);
    // Local (0,0) is global A[0,1]; local (1,1) is global A[1,2].
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(1, 1) == 1.0);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(1, 0) == 0.0);
    CHECK(m.row_keys()[0] == 0);
    CHECK(m.row_keys()[1] == 1);
    CHECK(m.col_keys()[0] == 1);
    CHECK(m.col_keys()[1] == 2);
}

TEST_CASE("from_edge_list sorts subsets given in any order") {
    SparseAdjacency a = from_edge_list(p3_edges(), std::vector<int>{1, 0},
                                       std::vector<int>{2, 1});
    SparseAdjacency b = from_edge_list(p3_edges(), std::vector<int>{0, 1},
                                       std::vector<int>{1, 2});
    CHECK(a == b);
}

TEST_CASE("from_edge_list accepts a diagonal entry but reports it") {
    std::vector<std::string> warnings;
    SparseAdjacency m =
        from_edge_list(std::vector<Edge>{{0, 0, 1.0}}, std::nullopt, std::nullopt,
                       &warnings);
    CHECK(m.rows() == 1);
    CHECK(m.at(0, 0) == 1.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("diagonal") != std::string::npos);
}

TEST_CASE("from_edge_list validation errors") {
    CHECK_THROWS_AS(from_edge_list(std::vector<Edge>{{-1, 0, 1.0}}), InvalidValue);
    CHECK_THROWS_AS(
        from_edge_list(std::vector<Edge>{{0, 1, std::numeric_limits<double>::quiet_NaN()}}),
        InvalidValue);
    CHECK_THROWS_AS(from_edge_list(p3_edges(), std::vector<int>{0, 0}), InvalidValue);
    // Same position with conflicting values.
    CHECK_THROWS_AS(from_edge_list(std::vector<Edge>{{0, 1, 1.0}, {0, 1, 2.0}}),
                    DuplicateEntry);
    // Exact duplicates collapse instead.
    SparseAdjacency m = from_edge_list(std::vector<Edge>{{0, 1, 1.0}, {0, 1, 1.0}});
    CHECK(m.nnz() == 1);
}

TEST_CASE("edges outside the restriction are dropped") {
    SparseAdjacency m = from_edge_list(p3_edges(), std::vector<int>{0},
                                       std::vector<int>{0});
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 1);
    CHECK(m.nnz() == 0);
}

TEST_CASE("sparse2dict emits keys in CSR order without custom fields for P3") {
    AdjacencyDict d = sparse2dict(from_edge_list(p3_edges()));
    REQUIRE(d.keys.size() == 4);
    CHECK(d.keys[0] == std::pair<int, int>(0, 1));
    CHECK(d.keys[1] == std::pair<int, int>(1, 0));
    CHECK(d.keys[2] == std::pair<int, int>(1, 2));
    CHECK(d.keys[3] == std::pair<int, int>(2, 1));
    CHECK(d.values == std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK(!d.rowkeys_custom);
    CHECK(!d.colkeys_custom);
    CHECK(!d.keys_custom);
}

TEST_CASE("sparse2dict of an empty matrix gives empty lists") {
    AdjacencyDict d = sparse2dict(from_edge_list(p3_edges(), std::vector<int>{0},
                                                 std::vector<int>{0}));
    CHECK(d.keys.empty());
    CHECK(d.values.empty());
}

TEST_CASE("sparse2dict carries global identities for submatrices") {
    AdjacencyDict d = sparse2dict(from_edge_list(p3_edges(), std::vector<int>{0, 1},
                                                 std::vector<int>{1, 2}));
    REQUIRE(d.rowkeys_custom);
    REQUIRE(d.colkeys_custom);
    REQUIRE(d.keys_custom);
    CHECK(*d.rowkeys_custom == std::vector<int>{0, 1});
    CHECK(*d.colkeys_custom == std::vector<int>{1, 2});
    REQUIRE(d.keys_custom->size() == 2);
    CHECK((*d.keys_custom)[0] == std::pair<int, int>(0, 1));
    CHECK((*d.keys_custom)[1] == std::pair<int, int>(1, 2));
}

TEST_CASE("from_dict inverts sparse2dict on P3") {
    SparseAdjacency m = from_edge_list(p3_edges());
    CHECK(from_dict(sparse2dict(m)) == m);
}

TEST_CASE("from_dict validates lengths and translations") {
    AdjacencyDict d;
    d.keys = {{0, 0}};
    d.values = {1.0, 2.0};
    CHECK_THROWS_AS(from_dict(d), MalformedDict);

    d.values = {1.0};
    d.rowkeys_custom = std::vector<int>{5};
    d.colkeys_custom = std::vector<int>{7};
    d.keys_custom = std::vector<std::pair<int, int>>{{5, 8}}; // 8 != colkeys[0]
    CHECK_THROWS_AS(from_dict(d), MalformedDict);

    (*d.keys_custom)[0] = {5, 7};
    SparseAdjacency m = from_dict(d);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 1);
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.row_keys()[0] == 5);
    CHECK(m.col_keys()[0] == 7);
}

TEST_CASE("from_dict rejects conflicting repeated keys as malformed") {
    AdjacencyDict d;
    d.keys = {{0, 0}, {0, 0}};
    d.values = {1.0, 2.0};
    CHECK_THROWS_AS(from_dict(d), MalformedDict);
}

TEST_CASE("dict round trip is the identity, including custom keys and zeros") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        SparseAdjacency m = random_matrix(rng, rep % 2 == 0);
        SparseAdjacency back = from_dict(sparse2dict(m));
        CHECK(back == m);
    }
}

TEST_CASE("add_scaled_selfloops on the full P3 matrix") {
    SparseAdjacency a_hat = add_scaled_selfloops(from_edge_list(p3_edges()), 1.0);
    CHECK(a_hat.nnz() == 7);
    CHECK(matrix_equals(a_hat.densify(), {{1, 1, 0}, {1, 1, 1}, {0, 1, 1}}));
}

TEST_CASE("add_scaled_selfloops locates the diagonal by global node identity") {
    SparseAdjacency sub = from_edge_list(p3_edges(), std::vector<int>{0, 1},
                                         std::vector<int>{1, 2});
    SparseAdjacency a_hat = add_scaled_selfloops(sub, 1.0);
    // Node 1 sits at local row 1 and local column 0.
    CHECK(a_hat.nnz() == 3);
    CHECK(matrix_equals(a_hat.densify(), {{1, 0}, {1, 1}}));
}

TEST_CASE("add_scaled_selfloops with lambda=0 stores structural zeros") {
    SparseAdjacency m = from_edge_list(p3_edges());
    SparseAdjacency a_hat = add_scaled_selfloops(m, 0.0);
    CHECK(a_hat.nnz() == 7); // 4 edges + 3 zero-valued diagonal entries
    CHECK(matrix_equals(a_hat.densify(), {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
    CHECK(a_hat.stored(0, 0));
    CHECK(a_hat.at(0, 0) == 0.0);
    CHECK_THROWS_AS(add_scaled_selfloops(m, std::numeric_limits<double>::infinity()),
                    InvalidValue);
}

TEST_CASE("add_scaled_selfloops adds to an existing diagonal value") {
    std::vector<Edge> edges = p3_edges();
    edges.push_back({1, 1, 0.5});
    SparseAdjacency a_hat = add_scaled_selfloops(from_edge_list(edges), 2.0);
    CHECK(a_hat.at(1, 1) == 2.5);
}

TEST_CASE("full-graph lambda=1 densifies to A + I exactly") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = uniform_int(rng, 1, 15);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && uniform01(rng) < 0.3)
                    edges.push_back({i, j, uniform(rng, -2.0, 2.0)});
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        SparseAdjacency a = from_edge_list(edges, all, all);
        Matrix got = add_scaled_selfloops(a, 1.0).densify();
        Matrix want = a.densify();
        for (int i = 0; i < n; ++i) want(i, i) += 1.0;
        CHECK(got.rows() == want.rows());
        bool same = true;
        for (int i = 0; i < n && same; ++i)
            for (int j = 0; j < n && same; ++j)
                same = got(i, j) == want(i, j);
        CHECK(same);
    }
}

TEST_CASE("submatrix self-loop placement matches the dense (A + lambda I) slice") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = uniform_int(rng, 2, 14);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && uniform01(rng) < 0.35)
                    edges.push_back({i, j, uniform(rng, -2.0, 2.0)});
        std::vector<int> v1, v2;
        for (int i = 0; i < n; ++i) {
            if (uniform01(rng) < 0.6) v1.push_back(i);
            if (uniform01(rng) < 0.6) v2.push_back(i);
        }
        if (v1.empty()) v1.push_back(uniform_int(rng, 0, n - 1));
        if (v2.empty()) v2.push_back(uniform_int(rng, 0, n - 1));
        const double lambda = std::vector<double>{0.0, 0.5, 1.0, 2.0}[
            static_cast<std::size_t>(uniform_int(rng, 0, 3))];

        Matrix got =
            add_scaled_selfloops(from_edge_list(edges, v1, v2), lambda).densify();

        // Same arithmetic on the dense side: fill A, add lambda on the
        // diagonal, slice rows v1 x cols v2.
        Matrix full(n, n, 0.0);
        for (const Edge& e : edges) full(e.row, e.col) = e.value;
        for (int i = 0; i < n; ++i) full(i, i) += lambda;
        bool same = got.rows() == static_cast<int>(v1.size()) &&
                    got.cols() == static_cast<int>(v2.size());
        for (std::size_t i = 0; i < v1.size() && same; ++i)
            for (std::size_t j = 0; j < v2.size() && same; ++j)
                same = got(static_cast<int>(i), static_cast<int>(j)) ==
                       full(v1[i], v2[j]);
        CHECK(same);
    }
}

TEST_CASE("transpose_apply matches hand-computed P3 cases") {
    SparseAdjacency a_hat = add_scaled_selfloops(from_edge_list(p3_edges()), 1.0);
    Matrix x(3, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    x(2, 0) = 3.0;

    std::vector<double> ones{1.0, 1.0, 1.0};
    Matrix y = transpose_apply(a_hat, ones, x);
    CHECK(y.rows() == 3);
    CHECK(y.cols() == 1);
    CHECK(y(0, 0) == 3.0);
    CHECK(y(1, 0) == 6.0);
    CHECK(y(2, 0) == 5.0);

    std::vector<double> scale{2.0, 1.0, 1.0};
    Matrix y2 = transpose_apply(a_hat, scale, x);
    CHECK(y2(0, 0) == 4.0);
    CHECK(y2(1, 0) == 7.0);
    CHECK(y2(2, 0) == 5.0);

    std::vector<double> zeros(3, 0.0);
    Matrix y3 = transpose_apply(a_hat, zeros, x);
    for (double v : y3.data()) CHECK(v == 0.0);
}

TEST_CASE("transpose_apply shape errors") {
    SparseAdjacency m = from_edge_list(p3_edges());
    Matrix x(3, 2, 1.0);
    std::vector<double> short_scale{1.0, 1.0};
    CHECK_THROWS_AS(transpose_apply(m, short_scale, x), ShapeError);
    Matrix bad_x(2, 2, 1.0);
    std::vector<double> scale{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(transpose_apply(m, scale, bad_x), ShapeError);
}

TEST_CASE("transpose_apply equals the densified row-scaled product") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const int n1 = uniform_int(rng, 1, 50);
        const int n2 = uniform_int(rng, 1, 50);
        std::vector<Edge> entries;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                if (uniform01(rng) < 0.3) entries.push_back({i, j, uniform(rng, -2.0, 2.0)});
        std::vector<int> rk(static_cast<std::size_t>(n1)), ck(static_cast<std::size_t>(n2));
        std::iota(rk.begin(), rk.end(), 0);
        std::iota(ck.begin(), ck.end(), 0);
        SparseAdjacency m = SparseAdjacency::from_coo(rk, ck, entries);

        const int batch = uniform_int(rng, 1, 4);
        Matrix x(n1, batch);
        for (double& v : x.data()) v = uniform(rng, -1.0, 1.0);
        std::vector<double> scale(static_cast<std::size_t>(n1));
        for (double& s : scale) s = uniform(rng, -1.0, 1.0);

        Matrix got = transpose_apply(m, scale, x);
        Matrix dense = m.densify();
        for (int c = 0; c < batch; ++c) {
            for (int j = 0; j < n2; ++j) {
                double want = 0.0;
                for (int i = 0; i < n1; ++i)
                    want += dense(i, j) * scale[static_cast<std::size_t>(i)] * x(i, c);
                CHECK(std::abs(got(j, c) - want) <= 1e-12);
            }
        }
    }
}

TEST_CASE("from_coo validates keys, ranges, and values") {
    CHECK_THROWS_AS(SparseAdjacency::from_coo({1, 0}, {0}, std::vector<Edge>{}),
                    MalformedDict);
    CHECK_THROWS_AS(SparseAdjacency::from_coo({0}, {0, 0}, std::vector<Edge>{}),
                    MalformedDict);
    CHECK_THROWS_AS(
        SparseAdjacency::from_coo({0}, {0}, std::vector<Edge>{{0, 1, 1.0}}),
        ShapeError);
    CHECK_THROWS_AS(
        SparseAdjacency::from_coo(
            {0}, {0},
            std::vector<Edge>{{0, 0, std::numeric_limits<double>::infinity()}}),
        InvalidValue);
}

TEST_CASE("densify and stored/at agree") {
    SparseAdjacency m = from_edge_list(p3_edges(), std::vector<int>{0, 1},
                                       std::vector<int>{1, 2});
    Matrix d = m.densify();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            CHECK(d(i, j) == m.at(i, j));
}
