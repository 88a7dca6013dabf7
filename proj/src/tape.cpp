#include "gml/tape.hpp"

#include "gml/error.hpp"

namespace gml {

Tensor& Tape::GradSink::grad_of(int node) {
    if (present_.empty()) present_.assign(tape_.nodes_.size(), false);
    if (node < 0 || static_cast<std::size_t>(node) >= slots_.size())
        throw ParameterError("grad_of: node id out of range");
    if (!present_[node]) {
        const auto& n = tape_.nodes_[node];
        slots_[node] = Tensor::zeros(n.rows, n.cols);
        present_[node] = true;
    }
    return slots_[node];
}

bool Tape::GradSink::has(int node) const {
    return !present_.empty() && node >= 0 && static_cast<std::size_t>(node) < present_.size() &&
           present_[node];
}

Tensor Tape::track(const Tensor& value) {
    Tensor t = value.detached();
    t.tape = this;
    t.tape_generation = generation_;
    t.node = static_cast<int>(nodes_.size());
    nodes_.push_back(OpNode{t.n_rows, t.n_cols, {}, nullptr});
    return t;
}

int Tape::record(std::size_t rows, std::size_t cols, std::vector<int> inputs,
                 BackwardFn backward) {
    for (int id : inputs) {
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
            throw ParameterError("record: input node precedes nothing (id out of range)");
    }
    nodes_.push_back(OpNode{rows, cols, std::move(inputs), std::move(backward)});
    return static_cast<int>(nodes_.size()) - 1;
}

GradMap Tape::backward(const Tensor& loss) {
    if (!loss.is_scalar())
        throw ParameterError("backward: loss must be scalar, got " + loss.shape_str());
    check_handle(loss);
    if (!loss.tracked() || loss.tape != this)
        throw ParameterError("backward: loss was not produced under this record");

    GradSink sink(*this);
    sink.grad_of(loss.node).values[0] = 1.0;

    for (int id = loss.node; id >= 0; --id) {
        if (!sink.has(id)) continue;
        const OpNode& n = nodes_[id];
        if (!n.backward) continue;  // leaf
        n.backward(sink.slots_[id], sink);
    }

    GradMap out;
    for (std::size_t id = 0; id < nodes_.size(); ++id)
        if (sink.has(static_cast<int>(id))) out.emplace(static_cast<int>(id), std::move(sink.slots_[id]));

    clear();
    return out;
}

void Tape::clear() {
    nodes_.clear();
    ++generation_;
}

bool Tape::owns(const Tensor& t) const {
    return t.tracked() && t.tape == this && t.tape_generation == generation_ &&
           static_cast<std::size_t>(t.node) < nodes_.size();
}

void Tape::check_handle(const Tensor& t) const {
    if (!t.tracked()) return;
    if (t.tape != this) throw ParameterError("tensor belongs to a different record");
    if (t.tape_generation != generation_)
        throw ParameterError("tensor handle refers to a consumed record");
    if (static_cast<std::size_t>(t.node) >= nodes_.size())
        throw ParameterError("tensor handle out of range for this record");
}

}  // namespace gml
