#pragma once

#include <cstdint>
#include <vector>

#include "gml/sparse.hpp"
#include "gml/tape.hpp"
#include "gml/tensor.hpp"

namespace gml {

// Differentiable operations over Tensors. Every function computes its value
// eagerly; when at least one operand is tracked, the op is appended to that
// operand's tape with enough saved state to push gradients back. Operands
// tracked on different tapes are rejected. All outputs are checked for
// finiteness; a NaN/Inf raises NumericError instead of propagating.
//
// Shape rules: operands are 2-d. add/sub/hadamard accept equal shapes or a
// [1 x C] row vector broadcast over the rows of an [N x C] operand; no other
// broadcast form exists, so shape bugs surface as errors.

// --- linear algebra ---------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);

/// Sparse operator times dense tensor. The operator's values are constants:
/// gradients flow to `b` only. `a` must outlive the backward pass of the
/// active record (graph operators and feature matrices live for the whole
/// run, which satisfies this).
Tensor spmm(const SparseMatrix& a, const Tensor& b);

// --- probability ------------------------------------------------------------

/// Row-wise softmax of z / T with row-max subtraction. T must be positive.
Tensor softmax_rows(const Tensor& z, double temperature);

/// Mean over rows of sum_c p log(p / q), with q clamped below at 1e-12
/// before the log and the 0 log 0 := 0 convention for p. Differentiable in
/// both arguments; negative entries raise DomainError.
Tensor kl_divergence(const Tensor& p, const Tensor& q);

/// Per-row negative entropy sum_c p log p (<= 0), one column out.
Tensor entropy_rows(const Tensor& p);

/// Mean over `mask` rows of -log softmax(logits)[i, labels[i]].
Tensor cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                     const std::vector<std::size_t>& mask);

// --- elementwise suite ------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor relu(const Tensor& a);
Tensor elu(const Tensor& a);        // alpha = 1
Tensor leaky_relu(const Tensor& a); // negative slope 0.2
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);        // clamped at 1e-12; negative input is a DomainError
Tensor reciprocal(const Tensor& a);
Tensor l1_norm(const Tensor& a);    // scalar sum of |entries|
Tensor sum(const Tensor& a);        // scalar sum of all entries
Tensor mean_rows(const Tensor& a);  // [N x C] -> [1 x C] column means
Tensor sum_rows(const Tensor& a);   // [N x C] -> [N x 1] row sums

Tensor concat_cols(const std::vector<Tensor>& parts);
inline Tensor concat_cols(const Tensor& a, const Tensor& b) { return concat_cols({a, b}); }

// --- structural ops (row selection / segment reductions) --------------------

/// out[k, :] = a[index[k], :]. Backward scatter-adds.
Tensor gather_rows(const Tensor& a, const std::vector<std::int64_t>& index);

/// out[segment[e], :] += a[e, :] for e over rows of a; `n_segments` rows out.
Tensor segment_sum(const Tensor& a, const std::vector<std::int64_t>& segment,
                   std::size_t n_segments);

/// Row i of `a` multiplied by the scalar s[i, 0]; s is [N x 1].
Tensor scale_rows(const Tensor& a, const Tensor& s);

// --- constants --------------------------------------------------------------

/// Clamp floor used before every log in the library.
inline constexpr double kLogEps = 1e-12;

}  // namespace gml
