#include "gml/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gml/error.hpp"

namespace gml {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<RowMat>;
using CMapRM = Eigen::Map<const RowMat>;

CMapRM emap(const Tensor& t) {
    return CMapRM(t.values.data(), static_cast<Eigen::Index>(t.n_rows),
                  static_cast<Eigen::Index>(t.n_cols));
}

MapRM emap(Tensor& t) {
    return MapRM(t.values.data(), static_cast<Eigen::Index>(t.n_rows),
                 static_cast<Eigen::Index>(t.n_cols));
}

/// Common tape of the tracked operands; nullptr when all are detached.
Tape* result_tape(std::initializer_list<const Tensor*> operands) {
    Tape* tape = nullptr;
    for (const Tensor* t : operands) {
        if (!t->tracked()) continue;
        t->tape->check_handle(*t);
        if (tape && tape != t->tape)
            throw ParameterError("operands are recorded on different tapes");
        tape = t->tape;
    }
    return tape;
}

/// Finalizes an op: finiteness check, then recording when a tape is active.
Tensor finish(const char* op, Tape* tape, Tensor out, std::vector<int> inputs,
              Tape::BackwardFn fn) {
    out.ensure_finite(op);
    if (tape) {
        out.tape = tape;
        out.tape_generation = tape->generation();
        out.node = tape->record(out.n_rows, out.n_cols, std::move(inputs), std::move(fn));
    }
    return out;
}

std::vector<int> tracked_ids(std::initializer_list<const Tensor*> operands) {
    std::vector<int> ids;
    for (const Tensor* t : operands)
        if (t->tracked()) ids.push_back(t->node);
    return ids;
}

int node_of(const Tensor& t) { return t.tracked() ? t.node : -1; }

void require_no_negative(const char* op, const Tensor& t) {
    for (double v : t.values)
        if (v < 0.0) throw DomainError(std::string(op) + ": negative entry " + std::to_string(v));
}

template <typename ValueFn, typename DerivFn>
Tensor unary(const char* op, const Tensor& a, ValueFn f, DerivFn dfdx) {
    Tape* tape = result_tape({&a});
    Tensor out(a.n_rows, a.n_cols);
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = f(a.values[i]);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, x = a.values, y = out.values, dfdx](const Tensor& g,
                                                               Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t i = 0; i < x.size(); ++i) ga.values[i] += g.values[i] * dfdx(x[i], y[i]);
        };
    }
    return finish(op, tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

// Broadcast resolution for the binary elementwise ops: equal shapes, or one
// operand is a [1 x C] row vector stretched over the other's rows.
enum class Bcast { None, ARow, BRow };

Bcast resolve_bcast(const char* op, const Tensor& a, const Tensor& b) {
    if (a.same_shape(b)) return Bcast::None;
    if (a.n_rows == 1 && a.n_cols == b.n_cols) return Bcast::ARow;
    if (b.n_rows == 1 && b.n_cols == a.n_cols) return Bcast::BRow;
    throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                         b.shape_str());
}

}  // namespace

// --- linear algebra ---------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.n_cols != b.n_rows)
        throw DimensionError("matmul: " + a.shape_str() + " times " + b.shape_str());
    Tape* tape = result_tape({&a, &b});
    Tensor out(a.n_rows, b.n_cols);
    emap(out).noalias() = emap(a) * emap(b);

    Tape::BackwardFn fn;
    if (tape) {
        const int na = node_of(a), nb = node_of(b);
        // Save only the operand needed for the other side's gradient.
        std::vector<double> av, bv;
        if (nb >= 0) av = a.values;
        if (na >= 0) bv = b.values;
        const std::size_t m = a.n_rows, k = a.n_cols, n = b.n_cols;
        fn = [na, nb, av = std::move(av), bv = std::move(bv), m, k, n](const Tensor& g,
                                                                       Tape::GradSink& sink) {
            CMapRM G(g.values.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
            if (na >= 0) {
                Tensor& ga = sink.grad_of(na);
                CMapRM B(bv.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
                emap(ga).noalias() += G * B.transpose();
            }
            if (nb >= 0) {
                Tensor& gb = sink.grad_of(nb);
                CMapRM A(av.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
                emap(gb).noalias() += A.transpose() * G;
            }
        };
    }
    return finish("matmul", tape, std::move(out), tracked_ids({&a, &b}), std::move(fn));
}

Tensor spmm(const SparseMatrix& a, const Tensor& b) {
    Tensor out = sparse_times_dense(a, b);
    Tape* tape = result_tape({&b});
    Tape::BackwardFn fn;
    if (tape) {
        // The operator is captured by pointer: graph operators and feature
        // matrices outlive the step's record (see header contract).
        fn = [nb = b.node, op = &a](const Tensor& g, Tape::GradSink& sink) {
            Tensor& gb = sink.grad_of(nb);
            for (std::size_t i = 0; i < op->n_rows; ++i) {
                const double* g_row = g.values.data() + i * g.n_cols;
                for (std::int64_t k = op->row_ptr[i]; k < op->row_ptr[i + 1]; ++k) {
                    double w = op->vals[k];
                    double* gb_row =
                        gb.values.data() + static_cast<std::size_t>(op->col_idx[k]) * g.n_cols;
                    for (std::size_t j = 0; j < g.n_cols; ++j) gb_row[j] += w * g_row[j];
                }
            }
        };
    }
    return finish("spmm", tape, std::move(out), tracked_ids({&b}), std::move(fn));
}

// --- probability ------------------------------------------------------------

Tensor softmax_rows(const Tensor& z, double temperature) {
    if (!(temperature > 0.0))
        throw ParameterError("softmax_rows: temperature must be positive, got " +
                             std::to_string(temperature));
    Tape* tape = result_tape({&z});
    Tensor out(z.n_rows, z.n_cols);
    for (std::size_t i = 0; i < z.n_rows; ++i) {
        const double* zr = z.values.data() + i * z.n_cols;
        double* pr = out.values.data() + i * z.n_cols;
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < z.n_cols; ++c) m = std::max(m, zr[c] / temperature);
        double denom = 0.0;
        for (std::size_t c = 0; c < z.n_cols; ++c) {
            pr[c] = std::exp(zr[c] / temperature - m);
            denom += pr[c];
        }
        for (std::size_t c = 0; c < z.n_cols; ++c) pr[c] /= denom;
    }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [nz = z.node, p = out.values, T = temperature, cols = z.n_cols](
                 const Tensor& g, Tape::GradSink& sink) {
            Tensor& gz = sink.grad_of(nz);
            const std::size_t rows = g.n_rows;
            for (std::size_t i = 0; i < rows; ++i) {
                const double* gr = g.values.data() + i * cols;
                const double* pr = p.data() + i * cols;
                double dot = 0.0;
                for (std::size_t c = 0; c < cols; ++c) dot += gr[c] * pr[c];
                double* gzr = gz.values.data() + i * cols;
                for (std::size_t c = 0; c < cols; ++c) gzr[c] += (gr[c] - dot) * pr[c] / T;
            }
        };
    }
    return finish("softmax_rows", tape, std::move(out), tracked_ids({&z}), std::move(fn));
}

Tensor kl_divergence(const Tensor& p, const Tensor& q) {
    if (!p.same_shape(q))
        throw DimensionError("kl_divergence: " + p.shape_str() + " vs " + q.shape_str());
    require_no_negative("kl_divergence", p);
    require_no_negative("kl_divergence", q);
    Tape* tape = result_tape({&p, &q});

    const double inv_n = 1.0 / static_cast<double>(p.n_rows);
    double total = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        double pv = p.values[i];
        if (pv > 0.0)
            total += pv * (std::log(std::max(pv, kLogEps)) - std::log(std::max(q.values[i], kLogEps)));
    }
    Tensor out = Tensor::scalar(total * inv_n);

    Tape::BackwardFn fn;
    if (tape) {
        const int np = node_of(p), nq = node_of(q);
        fn = [np, nq, pv = p.values, qv = q.values, inv_n](const Tensor& g, Tape::GradSink& sink) {
            const double gs = g.values[0] * inv_n;
            if (np >= 0) {
                Tensor& gp = sink.grad_of(np);
                for (std::size_t i = 0; i < pv.size(); ++i)
                    if (pv[i] > 0.0)
                        gp.values[i] += gs * (std::log(std::max(pv[i], kLogEps)) -
                                              std::log(std::max(qv[i], kLogEps)) + 1.0);
            }
            if (nq >= 0) {
                Tensor& gq = sink.grad_of(nq);
                for (std::size_t i = 0; i < qv.size(); ++i)
                    if (qv[i] > kLogEps) gq.values[i] -= gs * pv[i] / qv[i];
            }
        };
    }
    return finish("kl_divergence", tape, std::move(out), tracked_ids({&p, &q}), std::move(fn));
}

Tensor entropy_rows(const Tensor& p) {
    require_no_negative("entropy_rows", p);
    Tape* tape = result_tape({&p});
    Tensor out(p.n_rows, 1);
    for (std::size_t i = 0; i < p.n_rows; ++i) {
        double h = 0.0;
        for (std::size_t c = 0; c < p.n_cols; ++c) {
            double pv = p.at(i, c);
            if (pv > 0.0) h += pv * std::log(std::max(pv, kLogEps));
        }
        out.at(i, 0) = h;
    }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [np = p.node, pv = p.values, cols = p.n_cols](const Tensor& g, Tape::GradSink& sink) {
            Tensor& gp = sink.grad_of(np);
            for (std::size_t i = 0; i < g.n_rows; ++i) {
                const double gi = g.at(i, 0);
                for (std::size_t c = 0; c < cols; ++c) {
                    double x = pv[i * cols + c];
                    if (x > 0.0) gp.values[i * cols + c] += gi * (std::log(std::max(x, kLogEps)) + 1.0);
                }
            }
        };
    }
    return finish("entropy_rows", tape, std::move(out), tracked_ids({&p}), std::move(fn));
}

Tensor cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                     const std::vector<std::size_t>& mask) {
    if (labels.size() != logits.n_rows)
        throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                             logits.shape_str() + " logits");
    if (mask.empty()) throw ParameterError("cross_entropy: empty mask");
    const std::size_t C = logits.n_cols;
    for (std::size_t row : mask) {
        if (row >= logits.n_rows) throw ParameterError("cross_entropy: mask row out of range");
        if (labels[row] < 0 || static_cast<std::size_t>(labels[row]) >= C)
            throw DomainError("cross_entropy: label " + std::to_string(labels[row]) +
                              " out of range for " + std::to_string(C) + " classes");
    }
    Tape* tape = result_tape({&logits});

    const double inv_m = 1.0 / static_cast<double>(mask.size());
    // Probabilities saved per masked row for the backward pass.
    std::vector<double> probs(mask.size() * C);
    double total = 0.0;
    for (std::size_t k = 0; k < mask.size(); ++k) {
        const double* zr = logits.values.data() + mask[k] * C;
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < C; ++c) m = std::max(m, zr[c]);
        double denom = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            probs[k * C + c] = std::exp(zr[c] - m);
            denom += probs[k * C + c];
        }
        for (std::size_t c = 0; c < C; ++c) probs[k * C + c] /= denom;
        total += m + std::log(denom) - zr[labels[mask[k]]];
    }
    Tensor out = Tensor::scalar(total * inv_m);

    Tape::BackwardFn fn;
    if (tape) {
        std::vector<int> masked_labels(mask.size());
        for (std::size_t k = 0; k < mask.size(); ++k) masked_labels[k] = labels[mask[k]];
        fn = [nz = logits.node, probs = std::move(probs), rows = mask,
              masked_labels = std::move(masked_labels), C, inv_m](const Tensor& g,
                                                                  Tape::GradSink& sink) {
            Tensor& gz = sink.grad_of(nz);
            const double gs = g.values[0] * inv_m;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                double* gzr = gz.values.data() + rows[k] * C;
                for (std::size_t c = 0; c < C; ++c) {
                    double delta = probs[k * C + c] - (static_cast<int>(c) == masked_labels[k] ? 1.0 : 0.0);
                    gzr[c] += gs * delta;
                }
            }
        };
    }
    return finish("cross_entropy", tape, std::move(out), tracked_ids({&logits}), std::move(fn));
}

// --- elementwise suite ------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
    Bcast bc = resolve_bcast("add", a, b);
    Tape* tape = result_tape({&a, &b});
    const Tensor& mat = bc == Bcast::ARow ? b : a;
    Tensor out(mat.n_rows, mat.n_cols);
    for (std::size_t i = 0; i < out.n_rows; ++i)
        for (std::size_t j = 0; j < out.n_cols; ++j) {
            double av = bc == Bcast::ARow ? a.at(0, j) : a.at(i, j);
            double bv = bc == Bcast::BRow ? b.at(0, j) : b.at(i, j);
            out.at(i, j) = av + bv;
        }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = node_of(a), nb = node_of(b), bc](const Tensor& g, Tape::GradSink& sink) {
            auto push = [&](int node, bool is_row) {
                if (node < 0) return;
                Tensor& gr = sink.grad_of(node);
                if (!is_row) {
                    for (std::size_t i = 0; i < g.values.size(); ++i) gr.values[i] += g.values[i];
                } else {
                    for (std::size_t i = 0; i < g.n_rows; ++i)
                        for (std::size_t j = 0; j < g.n_cols; ++j) gr.values[j] += g.at(i, j);
                }
            };
            push(na, bc == Bcast::ARow);
            push(nb, bc == Bcast::BRow);
        };
    }
    return finish("add", tape, std::move(out), tracked_ids({&a, &b}), std::move(fn));
}

Tensor sub(const Tensor& a, const Tensor& b) {
    Bcast bc = resolve_bcast("sub", a, b);
    Tape* tape = result_tape({&a, &b});
    const Tensor& mat = bc == Bcast::ARow ? b : a;
    Tensor out(mat.n_rows, mat.n_cols);
    for (std::size_t i = 0; i < out.n_rows; ++i)
        for (std::size_t j = 0; j < out.n_cols; ++j) {
            double av = bc == Bcast::ARow ? a.at(0, j) : a.at(i, j);
            double bv = bc == Bcast::BRow ? b.at(0, j) : b.at(i, j);
            out.at(i, j) = av - bv;
        }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = node_of(a), nb = node_of(b), bc](const Tensor& g, Tape::GradSink& sink) {
            auto push = [&](int node, bool is_row, double sign) {
                if (node < 0) return;
                Tensor& gr = sink.grad_of(node);
                if (!is_row) {
                    for (std::size_t i = 0; i < g.values.size(); ++i)
                        gr.values[i] += sign * g.values[i];
                } else {
                    for (std::size_t i = 0; i < g.n_rows; ++i)
                        for (std::size_t j = 0; j < g.n_cols; ++j) gr.values[j] += sign * g.at(i, j);
                }
            };
            push(na, bc == Bcast::ARow, 1.0);
            push(nb, bc == Bcast::BRow, -1.0);
        };
    }
    return finish("sub", tape, std::move(out), tracked_ids({&a, &b}), std::move(fn));
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    Bcast bc = resolve_bcast("hadamard", a, b);
    Tape* tape = result_tape({&a, &b});
    const Tensor& mat = bc == Bcast::ARow ? b : a;
    Tensor out(mat.n_rows, mat.n_cols);
    for (std::size_t i = 0; i < out.n_rows; ++i)
        for (std::size_t j = 0; j < out.n_cols; ++j) {
            double av = bc == Bcast::ARow ? a.at(0, j) : a.at(i, j);
            double bv = bc == Bcast::BRow ? b.at(0, j) : b.at(i, j);
            out.at(i, j) = av * bv;
        }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = node_of(a), nb = node_of(b), bc, av = a.values, bv = b.values,
              cols = out.n_cols](const Tensor& g, Tape::GradSink& sink) {
            auto other_at = [&](const std::vector<double>& vals, bool is_row, std::size_t i,
                                std::size_t j) { return is_row ? vals[j] : vals[i * cols + j]; };
            if (na >= 0) {
                Tensor& ga = sink.grad_of(na);
                bool a_row = bc == Bcast::ARow;
                for (std::size_t i = 0; i < g.n_rows; ++i)
                    for (std::size_t j = 0; j < g.n_cols; ++j) {
                        double w = g.at(i, j) * other_at(bv, bc == Bcast::BRow, i, j);
                        if (a_row)
                            ga.values[j] += w;
                        else
                            ga.values[i * cols + j] += w;
                    }
            }
            if (nb >= 0) {
                Tensor& gb = sink.grad_of(nb);
                bool b_row = bc == Bcast::BRow;
                for (std::size_t i = 0; i < g.n_rows; ++i)
                    for (std::size_t j = 0; j < g.n_cols; ++j) {
                        double w = g.at(i, j) * other_at(av, bc == Bcast::ARow, i, j);
                        if (b_row)
                            gb.values[j] += w;
                        else
                            gb.values[i * cols + j] += w;
                    }
            }
        };
    }
    return finish("hadamard", tape, std::move(out), tracked_ids({&a, &b}), std::move(fn));
}

Tensor scale(const Tensor& a, double factor) {
    return unary("scale", a, [factor](double x) { return x * factor; },
                 [factor](double, double) { return factor; });
}

Tensor relu(const Tensor& a) {
    return unary("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor elu(const Tensor& a) {
    return unary("elu", a, [](double x) { return x > 0.0 ? x : std::expm1(x); },
                 [](double x, double) { return x > 0.0 ? 1.0 : std::exp(x); });
}

Tensor leaky_relu(const Tensor& a) {
    return unary("leaky_relu", a, [](double x) { return x > 0.0 ? x : 0.2 * x; },
                 [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.2 : 0.0); });
}

Tensor exp(const Tensor& a) {
    return unary("exp", a, [](double x) { return std::exp(x); },
                 [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
    require_no_negative("log", a);
    return unary("log", a, [](double x) { return std::log(std::max(x, kLogEps)); },
                 [](double x, double) { return x > kLogEps ? 1.0 / x : 0.0; });
}

Tensor reciprocal(const Tensor& a) {
    return unary("reciprocal", a, [](double x) { return 1.0 / x; },
                 [](double, double y) { return -y * y; });
}

Tensor l1_norm(const Tensor& a) {
    Tape* tape = result_tape({&a});
    double total = 0.0;
    for (double v : a.values) total += std::fabs(v);
    Tensor out = Tensor::scalar(total);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, x = a.values](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t i = 0; i < x.size(); ++i)
                ga.values[i] += g.values[0] * (x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0));
        };
    }
    return finish("l1_norm", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor sum(const Tensor& a) {
    Tape* tape = result_tape({&a});
    double total = 0.0;
    for (double v : a.values) total += v;
    Tensor out = Tensor::scalar(total);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, n = a.values.size()](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t i = 0; i < n; ++i) ga.values[i] += g.values[0];
        };
    }
    return finish("sum", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor mean_rows(const Tensor& a) {
    if (a.n_rows == 0) throw DimensionError("mean_rows: empty tensor");
    Tape* tape = result_tape({&a});
    Tensor out(1, a.n_cols);
    const double inv_n = 1.0 / static_cast<double>(a.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j) out.at(0, j) += a.at(i, j) * inv_n;
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, rows = a.n_rows, inv_n](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < g.n_cols; ++j) ga.at(i, j) += g.at(0, j) * inv_n;
        };
    }
    return finish("mean_rows", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor sum_rows(const Tensor& a) {
    Tape* tape = result_tape({&a});
    Tensor out(a.n_rows, 1);
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j) out.at(i, 0) += a.at(i, j);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, cols = a.n_cols](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t i = 0; i < g.n_rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) ga.at(i, j) += g.at(i, 0);
        };
    }
    return finish("sum_rows", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw ParameterError("concat_cols: no inputs");
    std::size_t rows = parts.front().n_rows, cols = 0;
    for (const Tensor& p : parts) {
        if (p.n_rows != rows) throw DimensionError("concat_cols: row counts differ");
        cols += p.n_cols;
    }
    std::vector<const Tensor*> ptrs;
    for (const Tensor& p : parts) ptrs.push_back(&p);
    Tape* tape = nullptr;
    for (const Tensor* p : ptrs) {
        Tape* t = result_tape({p});
        if (t) {
            if (tape && tape != t) throw ParameterError("concat_cols: operands on different tapes");
            tape = t;
        }
    }
    Tensor out(rows, cols);
    std::size_t offset = 0;
    for (const Tensor& p : parts) {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < p.n_cols; ++j) out.at(i, offset + j) = p.at(i, j);
        offset += p.n_cols;
    }
    Tape::BackwardFn fn;
    std::vector<int> ids;
    if (tape) {
        std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> segments;  // node, {offset, cols}
        std::size_t off = 0;
        for (const Tensor& p : parts) {
            if (p.tracked()) {
                segments.push_back({p.node, {off, p.n_cols}});
                ids.push_back(p.node);
            }
            off += p.n_cols;
        }
        fn = [segments = std::move(segments), rows](const Tensor& g, Tape::GradSink& sink) {
            for (const auto& [node, seg] : segments) {
                Tensor& gp = sink.grad_of(node);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < seg.second; ++j)
                        gp.at(i, j) += g.at(i, seg.first + j);
            }
        };
    }
    return finish("concat_cols", tape, std::move(out), std::move(ids), std::move(fn));
}

// --- structural ops ---------------------------------------------------------

Tensor gather_rows(const Tensor& a, const std::vector<std::int64_t>& index) {
    for (std::int64_t r : index)
        if (r < 0 || static_cast<std::size_t>(r) >= a.n_rows)
            throw DimensionError("gather_rows: row index out of range");
    Tape* tape = result_tape({&a});
    Tensor out(index.size(), a.n_cols);
    for (std::size_t k = 0; k < index.size(); ++k)
        std::copy_n(a.values.data() + static_cast<std::size_t>(index[k]) * a.n_cols, a.n_cols,
                    out.values.data() + k * a.n_cols);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, index, cols = a.n_cols](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t k = 0; k < index.size(); ++k) {
                double* dst = ga.values.data() + static_cast<std::size_t>(index[k]) * cols;
                const double* src = g.values.data() + k * cols;
                for (std::size_t j = 0; j < cols; ++j) dst[j] += src[j];
            }
        };
    }
    return finish("gather_rows", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor segment_sum(const Tensor& a, const std::vector<std::int64_t>& segment,
                   std::size_t n_segments) {
    if (segment.size() != a.n_rows)
        throw DimensionError("segment_sum: segment ids do not match row count");
    for (std::int64_t s : segment)
        if (s < 0 || static_cast<std::size_t>(s) >= n_segments)
            throw DimensionError("segment_sum: segment id out of range");
    Tape* tape = result_tape({&a});
    Tensor out(n_segments, a.n_cols);
    for (std::size_t e = 0; e < a.n_rows; ++e) {
        double* dst = out.values.data() + static_cast<std::size_t>(segment[e]) * a.n_cols;
        const double* src = a.values.data() + e * a.n_cols;
        for (std::size_t j = 0; j < a.n_cols; ++j) dst[j] += src[j];
    }
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = a.node, segment, cols = a.n_cols](const Tensor& g, Tape::GradSink& sink) {
            Tensor& ga = sink.grad_of(na);
            for (std::size_t e = 0; e < segment.size(); ++e) {
                const double* src = g.values.data() + static_cast<std::size_t>(segment[e]) * cols;
                double* dst = ga.values.data() + e * cols;
                for (std::size_t j = 0; j < cols; ++j) dst[j] += src[j];
            }
        };
    }
    return finish("segment_sum", tape, std::move(out), tracked_ids({&a}), std::move(fn));
}

Tensor scale_rows(const Tensor& a, const Tensor& s) {
    if (s.n_cols != 1 || s.n_rows != a.n_rows)
        throw DimensionError("scale_rows: scale must be " + std::to_string(a.n_rows) +
                             "x1, got " + s.shape_str());
    Tape* tape = result_tape({&a, &s});
    Tensor out(a.n_rows, a.n_cols);
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j) out.at(i, j) = a.at(i, j) * s.at(i, 0);
    Tape::BackwardFn fn;
    if (tape) {
        fn = [na = node_of(a), ns = node_of(s), av = a.values, sv = s.values,
              cols = a.n_cols](const Tensor& g, Tape::GradSink& sink) {
            if (na >= 0) {
                Tensor& ga = sink.grad_of(na);
                for (std::size_t i = 0; i < g.n_rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) ga.at(i, j) += g.at(i, j) * sv[i];
            }
            if (ns >= 0) {
                Tensor& gs = sink.grad_of(ns);
                for (std::size_t i = 0; i < g.n_rows; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < cols; ++j) acc += g.at(i, j) * av[i * cols + j];
                    gs.at(i, 0) += acc;
                }
            }
        };
    }
    return finish("scale_rows", tape, std::move(out), tracked_ids({&a, &s}), std::move(fn));
}

}  // namespace gml
