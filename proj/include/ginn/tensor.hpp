#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ginn/errors.hpp"

namespace ginn {

/// Dense row-major matrix of doubles. Plain storage, no linear-algebra
/// smarts; used for small dense operands and for densified sparse matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            throw ShapeError("Matrix: negative dimension");
    }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Dense rank-3 tensor, row-major over (d0, d1, d2).
///
/// Two roles in this library:
///   - batch tensors, laid out batch-first as (M, nodes, channels);
///   - weight tensors, laid out as (K, F, n1).
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2, double fill = 0.0)
        : d0_(d0), d1_(d1), d2_(d2),
          data_(static_cast<std::size_t>(d0) * d1 * d2, fill) {
        if (d0 < 0 || d1 < 0 || d2 < 0)
            throw ShapeError("Tensor3: negative dimension");
    }

    double& operator()(int i, int j, int k) {
        return data_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k];
    }
    double operator()(int i, int j, int k) const {
        return data_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k];
    }

    int dim0() const { return d0_; }
    int dim1() const { return d1_; }
    int dim2() const { return d2_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool same_shape(const Tensor3& other) const {
        return d0_ == other.d0_ && d1_ == other.d1_ && d2_ == other.d2_;
    }

private:
    int d0_ = 0;
    int d1_ = 0;
    int d2_ = 0;
    std::vector<double> data_;
};

/// Batch of node-feature matrices, shape (M, n, C), batch axis first.
using BatchTensor = Tensor3;

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

inline std::string shape_string(const Tensor3& t) {
    return "(" + std::to_string(t.dim0()) + ", " + std::to_string(t.dim1()) +
           ", " + std::to_string(t.dim2()) + ")";
}

} // namespace ginn
