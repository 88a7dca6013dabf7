#include "gml/tensor.hpp"

#include <cmath>

#include "gml/error.hpp"

namespace gml {

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> vals)
    : n_rows(rows), n_cols(cols), values(std::move(vals)) {
    if (values.size() != rows * cols)
        throw DimensionError("tensor: " + std::to_string(values.size()) + " values for shape " +
                             shape_str());
}

Tensor::Tensor(std::initializer_list<std::initializer_list<double>> rows) {
    n_rows = rows.size();
    n_cols = n_rows == 0 ? 0 : rows.begin()->size();
    values.reserve(n_rows * n_cols);
    for (const auto& r : rows) {
        if (r.size() != n_cols) throw DimensionError("tensor: ragged initializer rows");
        values.insert(values.end(), r.begin(), r.end());
    }
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value) {
    Tensor t(rows, cols);
    std::fill(t.values.begin(), t.values.end(), value);
    return t;
}

Tensor Tensor::identity(std::size_t n) {
    Tensor t(n, n);
    for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

Tensor Tensor::row(std::vector<double> vals) {
    std::size_t n = vals.size();
    return Tensor(1, n, std::move(vals));
}

Tensor Tensor::column(std::vector<double> vals) {
    std::size_t n = vals.size();
    return Tensor(n, 1, std::move(vals));
}

double Tensor::item() const {
    if (!is_scalar()) throw DimensionError("item: tensor is " + shape_str() + ", expected 1x1");
    return values[0];
}

Tensor Tensor::detached() const {
    Tensor t;
    t.n_rows = n_rows;
    t.n_cols = n_cols;
    t.values = values;
    return t;
}

void Tensor::ensure_finite(const std::string& context) const {
    for (double v : values) {
        if (!std::isfinite(v))
            throw NumericError(context + ": non-finite value in " + shape_str() + " tensor");
    }
}

std::string Tensor::shape_str() const {
    return std::to_string(n_rows) + "x" + std::to_string(n_cols);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw DimensionError("max_abs_diff: " + a.shape_str() + " vs " + b.shape_str());
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::fabs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace gml
