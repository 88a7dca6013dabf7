#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gml/sparse.hpp"
#include "gml/tensor.hpp"

namespace gml {

/// A node-classification dataset: one graph, per-node features and labels.
/// The raw adjacency is symmetric, duplicate-free, and carries no self
/// loops; message-passing operators are derived from it on demand.
struct GraphDataset {
    std::size_t num_nodes = 0;
    Tensor features;          // [N x D]
    std::vector<int> labels;  // size N; empty for collection members without node labels
    SparseMatrix adjacency;   // raw, symmetric, values 1.0
    int num_classes = 0;

    std::size_t feature_dim() const { return features.n_cols; }
    void validate() const;
};

/// A graph-classification corpus: M member graphs and one label per graph.
struct GraphCollection {
    std::vector<GraphDataset> graphs;
    std::vector<int> labels;  // size M
    int num_classes = 0;

    std::size_t size() const { return graphs.size(); }
    std::size_t feature_dim() const { return graphs.empty() ? 0 : graphs.front().feature_dim(); }
    void validate() const;
};

/// Train/val/test index partition over nodes or graphs.
struct Split {
    std::vector<std::size_t> train, val, test;
    std::uint64_t seed = 0;

    std::size_t total() const { return train.size() + val.size() + test.size(); }
};

struct LoadReport {
    std::size_t dropped_edges = 0;  // edges referencing unknown node ids
};

// --- loaders ----------------------------------------------------------------

/// Citation-corpus layout: a content file (node_id, D feature tokens, label)
/// and a cites file (cited_id, citing_id). Node ids and labels are remapped
/// to [0, N) / [0, C) by first appearance; edges are symmetrized; edges
/// naming unknown ids are dropped and counted in `report`.
GraphDataset load_citation(const std::string& content_path, const std::string& cites_path,
                           LoadReport* report = nullptr);

/// TU-style multi-graph corpus: <prefix>_A.txt (1-indexed edge list),
/// <prefix>_graph_indicator.txt, <prefix>_graph_labels.txt, and optionally
/// <prefix>_node_labels.txt / <prefix>_node_attributes.txt. The prefix is
/// discovered from the *_A.txt file in `directory`. Features come from the
/// attributes file when present (and `use_node_attributes`), else from
/// one-hot node labels.
GraphCollection load_tu(const std::string& directory, bool use_node_attributes = true);

struct TabularData {
    Tensor features;  // standardized per column
    std::vector<int> labels;
    int num_classes = 0;
};

/// Rectangular numeric CSV plus one categorical label column (by header name
/// or 0-based index given as a number). Features are standardized to zero
/// mean and unit variance per column; constant columns become all zeros.
TabularData load_tabular(const std::string& csv_path, const std::string& label_column);

/// Generic triplet layout in one directory: edges.csv ("src,dst" header),
/// features.csv (N x D numeric, no header), labels.csv (one integer per
/// node).
GraphDataset load_generic(const std::string& directory);

// --- graph operators --------------------------------------------------------

/// Symmetric normalization of A with self loops: D^{-1/2} (A + I) D^{-1/2}
/// where D is the degree of A + I. Isolated nodes keep a lone 1.0 diagonal.
SparseMatrix normalize_adjacency(const GraphDataset& g);

/// Row-stochastic neighbor-averaging operator: 1/deg(i) per neighbor of i,
/// zero rows for isolated nodes.
SparseMatrix mean_aggregation_operator(const GraphDataset& g);

// --- splits -----------------------------------------------------------------

/// Seeded shuffle then floor-rule sizes: floor(r1 n), floor(r2 n), rest.
Split split_indices(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed);

inline Split split_nodes(std::size_t n, std::uint64_t seed) {
    return split_indices(n, {0.70, 0.15, 0.15}, seed);
}
inline Split split_graphs(std::size_t m, std::uint64_t seed) {
    return split_indices(m, {0.75, 0.10, 0.15}, seed);
}

std::string split_to_json(const Split& s);
Split split_from_json(const std::string& json_text);

// --- synthetic graphs and noise ----------------------------------------------

/// Barabasi-Albert preferential attachment: a clique on the first m nodes,
/// then each new node attaches m edges to distinct existing nodes sampled
/// proportionally to degree. Adjacency only (no features/labels).
GraphDataset gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Erdos-Renyi: each unordered pair independently with probability p.
GraphDataset gen_random(std::size_t n, double p, std::uint64_t seed);

/// X + i.i.d. Laplace(0, scale) noise from a seeded stream. scale == 0
/// returns X unchanged.
Tensor add_laplace_noise(const Tensor& x, double scale, std::uint64_t seed);

/// Assembles a node dataset from parts (used to pair tabular features with
/// synthetic graph structure).
GraphDataset make_dataset(Tensor features, std::vector<int> labels, SparseMatrix adjacency,
                          int num_classes);

}  // namespace gml
