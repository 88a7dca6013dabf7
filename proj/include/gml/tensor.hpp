#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace gml {

class Tape;

/// Dense row-major matrix of 64-bit floats. Every tensor in the library is
/// rank 2; scalars are 1x1. When `node >= 0` the tensor participates in the
/// recording owned by `tape` and gradients can be requested through
/// Tape::backward. Detached tensors (node == -1) are plain values.
struct Tensor {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;  // row-major, size == n_rows * n_cols

    Tape* tape = nullptr;
    int node = -1;
    std::uint64_t tape_generation = 0;

    Tensor() = default;
    Tensor(std::size_t rows, std::size_t cols)
        : n_rows(rows), n_cols(cols), values(rows * cols, 0.0) {}
    Tensor(std::size_t rows, std::size_t cols, std::vector<double> vals);

    /// Row-major construction from nested braces, e.g. {{1,2},{3,4}}.
    Tensor(std::initializer_list<std::initializer_list<double>> rows);

    static Tensor zeros(std::size_t rows, std::size_t cols) { return Tensor(rows, cols); }
    static Tensor full(std::size_t rows, std::size_t cols, double value);
    static Tensor identity(std::size_t n);
    static Tensor scalar(double value) { return full(1, 1, value); }
    static Tensor row(std::vector<double> vals);
    static Tensor column(std::vector<double> vals);

    std::size_t size() const { return values.size(); }
    bool is_scalar() const { return n_rows == 1 && n_cols == 1; }
    bool same_shape(const Tensor& other) const {
        return n_rows == other.n_rows && n_cols == other.n_cols;
    }

    double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }

    double item() const;  // value of a 1x1 tensor

    bool tracked() const { return tape != nullptr && node >= 0; }

    /// Value-only copy, safe to hand to other workers or keep past backward.
    Tensor detached() const;

    /// Throws NumericError if any entry is NaN or infinite.
    void ensure_finite(const std::string& context) const;

    std::string shape_str() const;
};

/// Max |a-b| over all entries; shapes must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace gml
