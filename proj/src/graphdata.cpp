#include "gml/graphdata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gml/error.hpp"
#include "gml/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace gml {

namespace {

std::vector<std::string> split_tokens(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    if (sep == ' ') {
        while (ss >> tok) out.push_back(tok);
    } else {
        while (std::getline(ss, tok, sep)) {
            // trim surrounding whitespace
            auto b = tok.find_first_not_of(" \t\r");
            auto e = tok.find_last_not_of(" \t\r");
            out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
        }
    }
    return out;
}

double parse_double(const std::string& tok, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": expected a number, got '" + tok + "'", line_no);
    }
}

long parse_long(const std::string& tok, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": expected an integer, got '" + tok + "'", line_no);
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

/// Symmetrizes an edge set, dropping self loops and duplicates, and emits a
/// unit-valued CSR adjacency.
SparseMatrix edges_to_adjacency(std::size_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
    std::set<std::pair<std::int64_t, std::int64_t>> uniq;
    for (auto [u, v] : edges) {
        if (u == v) continue;
        uniq.insert({u, v});
        uniq.insert({v, u});
    }
    std::vector<std::int64_t> r, c;
    r.reserve(uniq.size());
    c.reserve(uniq.size());
    for (auto [u, v] : uniq) {
        r.push_back(u);
        c.push_back(v);
    }
    return SparseMatrix::from_triplets(n, n, std::move(r), std::move(c),
                                       std::vector<double>(uniq.size(), 1.0));
}

}  // namespace

void GraphDataset::validate() const {
    adjacency.validate();
    if (adjacency.n_rows != num_nodes || adjacency.n_cols != num_nodes)
        throw DatasetError("dataset: adjacency shape does not match node count");
    if (features.n_rows != num_nodes)
        throw DatasetError("dataset: feature rows do not match node count");
    if (!labels.empty() && labels.size() != num_nodes)
        throw DatasetError("dataset: label count does not match node count");
    for (std::size_t i = 0; i < num_nodes; ++i)
        for (std::int64_t k = adjacency.row_ptr[i]; k < adjacency.row_ptr[i + 1]; ++k)
            if (adjacency.col_idx[k] == static_cast<std::int64_t>(i))
                throw DatasetError("dataset: self loop stored in raw adjacency");
    if (!adjacency.is_symmetric()) throw DatasetError("dataset: adjacency not symmetric");
}

void GraphCollection::validate() const {
    if (graphs.empty()) throw DatasetError("collection: no graphs");
    if (labels.size() != graphs.size())
        throw DatasetError("collection: label count does not match graph count");
    std::size_t d = graphs.front().feature_dim();
    for (const auto& g : graphs) {
        g.validate();
        if (g.feature_dim() != d)
            throw DatasetError("collection: inconsistent feature dimensionality");
    }
}

GraphDataset load_citation(const std::string& content_path, const std::string& cites_path,
                           LoadReport* report) {
    std::ifstream content = open_or_throw(content_path);

    std::unordered_map<std::string, std::size_t> node_ids;
    std::unordered_map<std::string, int> label_ids;
    std::vector<std::vector<double>> feature_rows;
    std::vector<int> labels;

    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_tokens = 0;
    while (std::getline(content, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = split_tokens(line, ' ');
        if (toks.size() < 3)
            throw ParseError("content row needs id, features, label", line_no);
        if (expected_tokens == 0)
            expected_tokens = toks.size();
        else if (toks.size() != expected_tokens)
            throw ParseError("content row has " + std::to_string(toks.size()) +
                                 " fields, expected " + std::to_string(expected_tokens),
                             line_no);
        const std::string& id = toks.front();
        if (node_ids.count(id)) throw ParseError("duplicate node id '" + id + "'", line_no);
        node_ids.emplace(id, node_ids.size());

        std::vector<double> feats(toks.size() - 2);
        for (std::size_t j = 1; j + 1 < toks.size(); ++j)
            feats[j - 1] = parse_double(toks[j], "feature", line_no);
        feature_rows.push_back(std::move(feats));

        const std::string& lab = toks.back();
        auto [it, _] = label_ids.emplace(lab, static_cast<int>(label_ids.size()));
        labels.push_back(it->second);
    }
    if (feature_rows.empty()) throw DatasetError("empty content file: " + content_path);

    const std::size_t n = feature_rows.size();
    const std::size_t d = feature_rows.front().size();
    Tensor features(n, d);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(feature_rows[i].begin(), feature_rows[i].end(),
                  features.values.begin() + static_cast<std::ptrdiff_t>(i * d));

    std::ifstream cites = open_or_throw(cites_path);
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    std::size_t dropped = 0;
    line_no = 0;
    while (std::getline(cites, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = split_tokens(line, ' ');
        if (toks.size() != 2) throw ParseError("cites row needs two ids", line_no);
        auto a = node_ids.find(toks[0]);
        auto b = node_ids.find(toks[1]);
        if (a == node_ids.end() || b == node_ids.end()) {
            ++dropped;
            continue;
        }
        edges.push_back({static_cast<std::int64_t>(a->second), static_cast<std::int64_t>(b->second)});
    }
    if (report) report->dropped_edges = dropped;

    GraphDataset g;
    g.num_nodes = n;
    g.features = std::move(features);
    g.labels = std::move(labels);
    g.num_classes = static_cast<int>(label_ids.size());
    g.adjacency = edges_to_adjacency(n, edges);
    return g;
}

GraphCollection load_tu(const std::string& directory, bool use_node_attributes) {
    std::string prefix;
    for (const auto& entry : fs::directory_iterator(directory)) {
        std::string name = entry.path().filename().string();
        if (name.size() > 6 && name.substr(name.size() - 6) == "_A.txt") {
            prefix = name.substr(0, name.size() - 6);
            break;
        }
    }
    if (prefix.empty()) throw IoError("no *_A.txt edge list in " + directory);
    auto path = [&](const std::string& suffix) {
        return (fs::path(directory) / (prefix + suffix)).string();
    };

    // Graph membership, 1-indexed in the file.
    std::vector<std::int64_t> graph_of;
    {
        std::ifstream in = open_or_throw(path("_graph_indicator.txt"));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            graph_of.push_back(parse_long(line, "graph indicator", line_no) - 1);
        }
    }
    if (graph_of.empty()) throw DatasetError("empty graph indicator in " + directory);
    const std::size_t total_nodes = graph_of.size();
    const std::size_t num_graphs =
        static_cast<std::size_t>(*std::max_element(graph_of.begin(), graph_of.end())) + 1;

    std::vector<int> graph_labels;
    {
        std::ifstream in = open_or_throw(path("_graph_labels.txt"));
        std::unordered_map<long, int> remap;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            long raw = parse_long(line, "graph label", line_no);
            auto [it, _] = remap.emplace(raw, static_cast<int>(remap.size()));
            graph_labels.push_back(it->second);
        }
        if (graph_labels.size() != num_graphs)
            throw DatasetError("graph label count does not match graph count");
    }
    const int num_classes =
        graph_labels.empty() ? 0 : *std::max_element(graph_labels.begin(), graph_labels.end()) + 1;

    // Node features: attributes file preferred, else one-hot node labels.
    std::vector<std::vector<double>> node_feats(total_nodes);
    bool have_attrs = use_node_attributes && fs::exists(path("_node_attributes.txt"));
    if (have_attrs) {
        std::ifstream in = open_or_throw(path("_node_attributes.txt"));
        std::string line;
        std::size_t line_no = 0, node = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            if (node >= total_nodes) throw DatasetError("more attribute rows than nodes");
            auto toks = split_tokens(line, ',');
            for (const auto& t : toks)
                node_feats[node].push_back(parse_double(t, "node attribute", line_no));
            ++node;
        }
        if (node != total_nodes) throw DatasetError("attribute rows do not cover all nodes");
    } else if (fs::exists(path("_node_labels.txt"))) {
        std::ifstream in = open_or_throw(path("_node_labels.txt"));
        std::vector<long> raw(total_nodes);
        std::unordered_map<long, int> remap;
        std::string line;
        std::size_t line_no = 0, node = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            if (node >= total_nodes) throw DatasetError("more node label rows than nodes");
            raw[node] = parse_long(line, "node label", line_no);
            remap.emplace(raw[node], static_cast<int>(remap.size()));
            ++node;
        }
        if (node != total_nodes) throw DatasetError("node label rows do not cover all nodes");
        // Deterministic one-hot width: sorted distinct values.
        std::vector<long> distinct;
        for (auto& [k, _] : remap) distinct.push_back(k);
        std::sort(distinct.begin(), distinct.end());
        std::unordered_map<long, std::size_t> pos;
        for (std::size_t i = 0; i < distinct.size(); ++i) pos[distinct[i]] = i;
        for (std::size_t v = 0; v < total_nodes; ++v) {
            node_feats[v].assign(distinct.size(), 0.0);
            node_feats[v][pos[raw[v]]] = 1.0;
        }
    } else {
        // No node information at all: constant scalar feature.
        for (auto& f : node_feats) f.assign(1, 1.0);
    }

    // Edges, grouped per graph with local node indices.
    std::vector<std::size_t> local_index(total_nodes), node_count(num_graphs, 0);
    for (std::size_t v = 0; v < total_nodes; ++v) local_index[v] = node_count[graph_of[v]]++;

    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> edges(num_graphs);
    {
        std::ifstream in = open_or_throw(path("_A.txt"));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto toks = split_tokens(line, ',');
            if (toks.size() != 2) throw ParseError("edge row needs two node ids", line_no);
            long u = parse_long(toks[0], "edge endpoint", line_no) - 1;
            long v = parse_long(toks[1], "edge endpoint", line_no) - 1;
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= total_nodes ||
                static_cast<std::size_t>(v) >= total_nodes)
                throw ParseError("edge endpoint out of range", line_no);
            if (graph_of[u] != graph_of[v])
                throw DatasetError("edge crosses graphs at line " + std::to_string(line_no));
            edges[graph_of[u]].push_back({static_cast<std::int64_t>(local_index[u]),
                                          static_cast<std::int64_t>(local_index[v])});
        }
    }

    GraphCollection coll;
    coll.labels = std::move(graph_labels);
    coll.num_classes = num_classes;
    coll.graphs.resize(num_graphs);
    std::vector<std::size_t> filled(num_graphs, 0);
    const std::size_t d = node_feats.front().size();
    for (auto& f : node_feats)
        if (f.size() != d) throw DatasetError("inconsistent node feature width");
    for (std::size_t gi = 0; gi < num_graphs; ++gi) {
        GraphDataset& g = coll.graphs[gi];
        g.num_nodes = node_count[gi];
        g.features = Tensor(g.num_nodes, d);
        g.num_classes = num_classes;
        g.adjacency = edges_to_adjacency(g.num_nodes, edges[gi]);
    }
    for (std::size_t v = 0; v < total_nodes; ++v) {
        GraphDataset& g = coll.graphs[graph_of[v]];
        std::copy(node_feats[v].begin(), node_feats[v].end(),
                  g.features.values.begin() + static_cast<std::ptrdiff_t>(local_index[v] * d));
        ++filled[graph_of[v]];
    }
    coll.validate();
    return coll;
}

TabularData load_tabular(const std::string& csv_path, const std::string& label_column) {
    std::ifstream in = open_or_throw(csv_path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        rows.push_back(split_tokens(line, ','));
        if (rows.back().size() != rows.front().size())
            throw ParseError("ragged CSV row", line_no);
    }
    if (rows.empty()) throw DatasetError("empty CSV: " + csv_path);

    auto is_number = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t pos = 0;
        try {
            (void)std::stod(s, &pos);
        } catch (const std::exception&) {
            return false;
        }
        return pos == s.size();
    };

    bool has_header = false;
    for (const auto& tok : rows.front())
        if (!is_number(tok)) has_header = true;

    const std::size_t n_cols = rows.front().size();
    std::size_t label_idx = n_cols;
    if (is_number(label_column)) {
        label_idx = static_cast<std::size_t>(std::stol(label_column));
    } else if (has_header) {
        for (std::size_t j = 0; j < n_cols; ++j)
            if (rows.front()[j] == label_column) label_idx = j;
    }
    if (label_idx >= n_cols)
        throw ParameterError("label column '" + label_column + "' not found");

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t n = rows.size() - first_data;
    if (n == 0) throw DatasetError("CSV has a header but no data rows");
    const std::size_t d = n_cols - 1;

    TabularData out;
    out.features = Tensor(n, d);
    out.labels.resize(n);
    std::unordered_map<std::string, int> label_map;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + first_data];
        std::size_t jj = 0;
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (j == label_idx) continue;
            if (!is_number(row[j]))
                throw ParseError("non-numeric feature cell '" + row[j] + "'", i + first_data + 1);
            out.features.at(i, jj++) = std::stod(row[j]);
        }
        auto [it, _] = label_map.emplace(row[label_idx], static_cast<int>(label_map.size()));
        out.labels[i] = it->second;
    }
    out.num_classes = static_cast<int>(label_map.size());

    // Standardize: zero mean, unit variance; sigma = 0 guarded to zeros.
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += out.features.at(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double c = out.features.at(i, j) - mean;
            var += c * c;
        }
        var /= static_cast<double>(n);
        double sd = std::sqrt(var);
        for (std::size_t i = 0; i < n; ++i)
            out.features.at(i, j) = sd > 0.0 ? (out.features.at(i, j) - mean) / sd : 0.0;
    }
    return out;
}

GraphDataset load_generic(const std::string& directory) {
    fs::path dir(directory);
    std::ifstream fin = open_or_throw((dir / "features.csv").string());
    std::vector<std::vector<double>> feats;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(fin, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = split_tokens(line, ',');
        std::vector<double> row(toks.size());
        for (std::size_t j = 0; j < toks.size(); ++j)
            row[j] = parse_double(toks[j], "feature", line_no);
        feats.push_back(std::move(row));
        if (feats.back().size() != feats.front().size())
            throw ParseError("ragged features.csv row", line_no);
    }
    if (feats.empty()) throw DatasetError("empty features.csv in " + directory);
    const std::size_t n = feats.size(), d = feats.front().size();

    std::vector<int> labels;
    {
        std::ifstream lin = open_or_throw((dir / "labels.csv").string());
        line_no = 0;
        while (std::getline(lin, line)) {
            ++line_no;
            if (line.empty()) continue;
            long v = parse_long(line, "label", line_no);
            if (v < 0) throw DomainError("negative label in labels.csv");
            labels.push_back(static_cast<int>(v));
        }
    }
    if (labels.size() != n) throw DatasetError("labels.csv row count does not match features.csv");

    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    {
        std::ifstream ein = open_or_throw((dir / "edges.csv").string());
        line_no = 0;
        bool first = true;
        while (std::getline(ein, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto toks = split_tokens(line, ',');
            if (first) {
                first = false;
                if (toks.size() == 2 && toks[0] == "src" && toks[1] == "dst") continue;
            }
            if (toks.size() != 2) throw ParseError("edges.csv row needs src,dst", line_no);
            long u = parse_long(toks[0], "edge src", line_no);
            long v = parse_long(toks[1], "edge dst", line_no);
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
                static_cast<std::size_t>(v) >= n)
                throw ParseError("edge endpoint out of range", line_no);
            edges.push_back({u, v});
        }
    }

    GraphDataset g;
    g.num_nodes = n;
    g.features = Tensor(n, d);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(feats[i].begin(), feats[i].end(),
                  g.features.values.begin() + static_cast<std::ptrdiff_t>(i * d));
    g.labels = std::move(labels);
    g.num_classes = g.labels.empty() ? 0 : *std::max_element(g.labels.begin(), g.labels.end()) + 1;
    g.adjacency = edges_to_adjacency(n, edges);
    return g;
}

SparseMatrix normalize_adjacency(const GraphDataset& g) {
    const SparseMatrix& a = g.adjacency;
    const std::size_t n = g.num_nodes;
    std::vector<double> deg(n, 1.0);  // self loop contributes 1
    for (std::size_t i = 0; i < n; ++i)
        deg[i] += static_cast<double>(a.row_ptr[i + 1] - a.row_ptr[i]);

    std::vector<std::int64_t> r, c;
    std::vector<double> v;
    r.reserve(a.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        r.push_back(static_cast<std::int64_t>(i));
        c.push_back(static_cast<std::int64_t>(i));
        v.push_back(1.0 / deg[i]);
        for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            std::size_t j = static_cast<std::size_t>(a.col_idx[k]);
            r.push_back(static_cast<std::int64_t>(i));
            c.push_back(a.col_idx[k]);
            v.push_back(1.0 / std::sqrt(deg[i] * deg[j]));
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(r), std::move(c), std::move(v));
}

SparseMatrix mean_aggregation_operator(const GraphDataset& g) {
    const SparseMatrix& a = g.adjacency;
    SparseMatrix op(g.num_nodes, g.num_nodes);
    op.col_idx = a.col_idx;
    op.row_ptr = a.row_ptr;
    op.vals.resize(a.nnz());
    for (std::size_t i = 0; i < g.num_nodes; ++i) {
        std::int64_t deg = a.row_ptr[i + 1] - a.row_ptr[i];
        for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            op.vals[k] = 1.0 / static_cast<double>(deg);
    }
    return op;
}

Split split_indices(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed) {
    double total = ratios[0] + ratios[1] + ratios[2];
    if (std::fabs(total - 1.0) > 1e-9)
        throw ParameterError("split ratios must sum to 1, got " + std::to_string(total));
    if (n < 3) throw ParameterError("split: need at least 3 items, got " + std::to_string(n));

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    rng.shuffle(idx);

    const std::size_t n_train = static_cast<std::size_t>(std::floor(ratios[0] * static_cast<double>(n)));
    const std::size_t n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));

    Split s;
    s.seed = seed;
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.val.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
    s.test.assign(idx.begin() + n_train + n_val, idx.end());
    return s;
}

std::string split_to_json(const Split& s) {
    json j;
    j["seed"] = s.seed;
    j["train"] = s.train;
    j["val"] = s.val;
    j["test"] = s.test;
    return j.dump();
}

Split split_from_json(const std::string& text) {
    json j = json::parse(text);
    Split s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.val = j.at("val").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
}

GraphDataset gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m >= n)
        throw ParameterError("barabasi_albert: need 1 <= m < n");
    SplitMix64 rng(seed);

    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    // Endpoint multiset: each node appears once per incident edge, giving
    // degree-proportional sampling by uniform choice.
    std::vector<std::int64_t> endpoints;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            edges.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
            endpoints.push_back(static_cast<std::int64_t>(i));
            endpoints.push_back(static_cast<std::int64_t>(j));
        }

    for (std::size_t v = m; v < n; ++v) {
        std::set<std::int64_t> targets;
        while (targets.size() < m) {
            std::int64_t t;
            if (endpoints.empty()) {
                t = static_cast<std::int64_t>(rng.next_index(v));  // degenerate m == 1 start
            } else {
                t = endpoints[rng.next_index(endpoints.size())];
            }
            targets.insert(t);
        }
        for (std::int64_t t : targets) {
            edges.push_back({static_cast<std::int64_t>(v), t});
            endpoints.push_back(static_cast<std::int64_t>(v));
            endpoints.push_back(t);
        }
    }

    GraphDataset g;
    g.num_nodes = n;
    g.features = Tensor(n, 0);
    g.adjacency = edges_to_adjacency(n, edges);
    return g;
}

GraphDataset gen_random(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ParameterError("gen_random: p must lie in [0, 1]");
    SplitMix64 rng(seed);
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.next_double() < p)
                edges.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
    GraphDataset g;
    g.num_nodes = n;
    g.features = Tensor(n, 0);
    g.adjacency = edges_to_adjacency(n, edges);
    return g;
}

Tensor add_laplace_noise(const Tensor& x, double scale, std::uint64_t seed) {
    if (scale < 0.0) throw ParameterError("laplace noise: scale must be non-negative");
    Tensor out = x.detached();
    if (scale == 0.0) return out;
    SplitMix64 rng(seed);
    for (double& v : out.values) v += rng.laplace(scale);
    return out;
}

GraphDataset make_dataset(Tensor features, std::vector<int> labels, SparseMatrix adjacency,
                          int num_classes) {
    GraphDataset g;
    g.num_nodes = features.n_rows;
    g.features = std::move(features);
    g.labels = std::move(labels);
    g.adjacency = std::move(adjacency);
    g.num_classes = num_classes;
    g.validate();
    return g;
}

}  // namespace gml
