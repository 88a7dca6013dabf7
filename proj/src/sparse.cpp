#include "gml/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gml/error.hpp"

namespace gml {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : n_rows(rows), n_cols(cols), row_ptr(rows + 1, 0) {}

void SparseMatrix::validate() const {
    if (row_ptr.size() != n_rows + 1)
        throw DimensionError("csr: row_ptr size " + std::to_string(row_ptr.size()) +
                             " for " + std::to_string(n_rows) + " rows");
    if (row_ptr.front() != 0)
        throw DimensionError("csr: row_ptr[0] != 0");
    if (static_cast<std::size_t>(row_ptr.back()) != col_idx.size() || col_idx.size() != vals.size())
        throw DimensionError("csr: row_ptr/col_idx/vals lengths disagree");
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (row_ptr[i] > row_ptr[i + 1]) throw DimensionError("csr: row_ptr not monotone");
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (col_idx[k] < 0 || static_cast<std::size_t>(col_idx[k]) >= n_cols)
                throw DimensionError("csr: column index out of range");
            if (k > row_ptr[i] && col_idx[k - 1] >= col_idx[k])
                throw DimensionError("csr: columns not strictly increasing within a row");
        }
    }
}

Tensor SparseMatrix::to_dense() const {
    Tensor d(n_rows, n_cols);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            d.at(i, static_cast<std::size_t>(col_idx[k])) = vals[k];
    return d;
}

bool SparseMatrix::is_symmetric() const {
    if (n_rows != n_cols) return false;
    // Desk-scale check through the dense form would be wasteful for the big
    // corpora, so probe entries directly.
    auto entry = [this](std::size_t r, std::int64_t c) -> double {
        auto lo = col_idx.begin() + row_ptr[r];
        auto hi = col_idx.begin() + row_ptr[r + 1];
        auto it = std::lower_bound(lo, hi, c);
        if (it == hi || *it != c) return 0.0;
        return vals[it - col_idx.begin()];
    };
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            double back = entry(static_cast<std::size_t>(col_idx[k]), static_cast<std::int64_t>(i));
            if (back != vals[k]) return false;
        }
    return true;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<std::int64_t> r, std::vector<std::int64_t> c,
                                         std::vector<double> v) {
    if (r.size() != c.size() || r.size() != v.size())
        throw DimensionError("from_triplets: coordinate arrays disagree in length");
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] < 0 || static_cast<std::size_t>(r[k]) >= rows || c[k] < 0 ||
            static_cast<std::size_t>(c[k]) >= cols)
            throw DimensionError("from_triplets: index out of range");
    }
    std::vector<std::size_t> order(r.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (r[a] != r[b]) return r[a] < r[b];
        return c[a] < c[b];
    });

    SparseMatrix m(rows, cols);
    m.col_idx.reserve(r.size());
    m.vals.reserve(r.size());
    std::int64_t cur_row = -1;
    for (std::size_t k : order) {
        bool dup = cur_row == r[k] && !m.col_idx.empty() && m.col_idx.back() == c[k];
        if (dup) {
            m.vals.back() += v[k];
            continue;
        }
        m.col_idx.push_back(c[k]);
        m.vals.push_back(v[k]);
        cur_row = r[k];
        m.row_ptr[r[k] + 1] = static_cast<std::int64_t>(m.col_idx.size());
    }
    // Rows without entries inherit the previous offset.
    for (std::size_t i = 1; i <= rows; ++i)
        m.row_ptr[i] = std::max(m.row_ptr[i], m.row_ptr[i - 1]);
    m.validate();
    return m;
}

SparseMatrix SparseMatrix::from_dense(const Tensor& dense, double tol) {
    SparseMatrix m(dense.n_rows, dense.n_cols);
    for (std::size_t i = 0; i < dense.n_rows; ++i) {
        for (std::size_t j = 0; j < dense.n_cols; ++j) {
            double x = dense.at(i, j);
            if (std::fabs(x) > tol) {
                m.col_idx.push_back(static_cast<std::int64_t>(j));
                m.vals.push_back(x);
            }
        }
        m.row_ptr[i + 1] = static_cast<std::int64_t>(m.col_idx.size());
    }
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    m.col_idx.resize(n);
    m.vals.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.col_idx[i] = static_cast<std::int64_t>(i);
        m.row_ptr[i + 1] = static_cast<std::int64_t>(i + 1);
    }
    return m;
}

Tensor sparse_times_dense(const SparseMatrix& a, const Tensor& b) {
    if (a.n_cols != b.n_rows)
        throw DimensionError("spmm: " + std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols) +
                             " times " + b.shape_str());
    Tensor out(a.n_rows, b.n_cols);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        double* out_row = out.values.data() + i * b.n_cols;
        for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const double w = a.vals[k];
            const double* b_row = b.values.data() + static_cast<std::size_t>(a.col_idx[k]) * b.n_cols;
            for (std::size_t j = 0; j < b.n_cols; ++j) out_row[j] += w * b_row[j];
        }
    }
    return out;
}

Tensor sparse_transpose_times_dense(const SparseMatrix& a, const Tensor& b) {
    if (a.n_rows != b.n_rows)
        throw DimensionError("spmm_t: " + std::to_string(a.n_cols) + "x" + std::to_string(a.n_rows) +
                             " times " + b.shape_str());
    Tensor out(a.n_cols, b.n_cols);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const double* b_row = b.values.data() + i * b.n_cols;
        for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const double w = a.vals[k];
            double* out_row = out.values.data() + static_cast<std::size_t>(a.col_idx[k]) * b.n_cols;
            for (std::size_t j = 0; j < b.n_cols; ++j) out_row[j] += w * b_row[j];
        }
    }
    return out;
}

}  // namespace gml
