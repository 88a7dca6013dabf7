#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gml/tensor.hpp"

namespace gml {

/// Compressed sparse row matrix with 64-bit float values. Used for the graph
/// operators consumed by message passing and for near-binary feature
/// matrices where a dense product would be wasteful.
///
/// Invariants: row_ptr has n_rows+1 monotone entries starting at 0 and ending
/// at nnz; within each row the column indices are strictly increasing and
/// less than n_cols. validate() checks all of this.
struct SparseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::int64_t> row_ptr;  // size n_rows + 1
    std::vector<std::int64_t> col_idx;  // size nnz
    std::vector<double> vals;           // size nnz

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    std::size_t nnz() const { return col_idx.size(); }
    bool empty() const { return n_rows == 0 && n_cols == 0; }

    void validate() const;  // throws DimensionError on a broken invariant

    Tensor to_dense() const;

    bool is_symmetric() const;  // pattern and values

    /// Builds a CSR matrix from (row, col, value) triplets. Duplicate
    /// coordinates are summed. Throws DimensionError on out-of-range indices.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<std::int64_t> r, std::vector<std::int64_t> c,
                                      std::vector<double> v);

    /// CSR from a dense matrix, dropping entries with |x| <= tol.
    static SparseMatrix from_dense(const Tensor& dense, double tol = 0.0);

    static SparseMatrix identity(std::size_t n);
};

/// y = A * b (dense result). No recording; the differentiable version lives
/// in ops.hpp.
Tensor sparse_times_dense(const SparseMatrix& a, const Tensor& b);

/// y = A^T * b, computed by scattering rows of A; avoids materializing the
/// transpose.
Tensor sparse_transpose_times_dense(const SparseMatrix& a, const Tensor& b);

}  // namespace gml
