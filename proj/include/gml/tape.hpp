#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gml/tensor.hpp"

namespace gml {

/// node id -> gradient tensor, as produced by Tape::backward.
using GradMap = std::unordered_map<int, Tensor>;

/// Record of one training step's operations for reverse-mode
/// differentiation.
///
/// Ops append nodes in execution order, so node ids are already a
/// topological order of the graph. backward() walks ids in reverse,
/// accumulating gradients by addition where a node fans out, and then
/// consumes the record: the tape is cleared and its generation bumped, which
/// invalidates every tensor handle minted under the old generation.
///
/// A tape and the tensors recorded on it belong to a single worker for the
/// duration of a step. Detached copies are plain values and may cross
/// workers freely.
class Tape {
public:
    /// Gradient sink handed to backward functions. grad_of(id) returns the
    /// accumulation buffer for node `id`, materializing zeros on first use.
    class GradSink {
    public:
        explicit GradSink(Tape& tape) : tape_(tape), slots_(tape.nodes_.size()) {}
        Tensor& grad_of(int node);
        bool has(int node) const;

    private:
        friend class Tape;
        Tape& tape_;
        std::vector<Tensor> slots_;
        std::vector<bool> present_ = std::vector<bool>();
    };

    using BackwardFn = std::function<void(const Tensor& upstream, GradSink& sink)>;

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Registers a value tensor as a differentiable leaf of this record.
    Tensor track(const Tensor& value);

    /// Appends an operation node. `inputs` are the tracked inputs' node ids
    /// (constants are captured inside `backward` instead). Returns the new
    /// node id.
    int record(std::size_t rows, std::size_t cols, std::vector<int> inputs, BackwardFn backward);

    /// Reverse-mode traversal from a scalar loss. Returns gradients for
    /// every node that received one (leaves included). The record is
    /// consumed: the tape resets and previously minted handles go stale.
    GradMap backward(const Tensor& loss);

    void clear();

    std::size_t num_nodes() const { return nodes_.size(); }
    std::uint64_t generation() const { return generation_; }

    /// True when `t` is tracked, belongs to this tape, and its handle is
    /// from the live generation.
    bool owns(const Tensor& t) const;

    /// Throws ParameterError when a tracked tensor belongs to another tape
    /// or to a consumed record.
    void check_handle(const Tensor& t) const;

private:
    struct OpNode {
        std::size_t rows, cols;
        std::vector<int> inputs;
        BackwardFn backward;  // empty for leaves
    };

    std::vector<OpNode> nodes_;
    std::uint64_t generation_ = 0;
};

}  // namespace gml
