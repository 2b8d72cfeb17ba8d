#include "olp/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "olp/rng.hpp"

namespace olp {

Graph::Graph(NodeId n_nodes, std::span<const NodePair> edge_list,
             std::vector<std::string> labels)
    : adj_(n_nodes), labels_(std::move(labels)) {
    if (!labels_.empty() && static_cast<NodeId>(labels_.size()) != n_nodes)
        throw std::invalid_argument("label count does not match node count");
    edges_.assign(edge_list.begin(), edge_list.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (NodePair e : edges_) {
        if (e.v >= n_nodes) throw std::invalid_argument("edge endpoint out of range");
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(NodeId a, NodeId b) const {
    if (a == b) return false;
    const auto& small = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
    NodeId target = adj_[a].size() <= adj_[b].size() ? b : a;
    return std::binary_search(small.begin(), small.end(), target);
}

std::string Graph::label(NodeId v) const {
    if (labels_.empty()) return std::to_string(v);
    return labels_[v];
}

Graph Graph::with_toggled(std::span<const NodePair> remove,
                          std::span<const NodePair> insert) const {
    std::vector<NodePair> next = edges_;
    for (NodePair e : remove) {
        auto it = std::lower_bound(next.begin(), next.end(), e);
        if (it == next.end() || *it != e)
            throw std::invalid_argument("cannot remove a non-existent edge");
        next.erase(it);
    }
    for (NodePair e : insert) {
        auto it = std::lower_bound(next.begin(), next.end(), e);
        if (it != next.end() && *it == e)
            throw std::invalid_argument("cannot insert an existing edge");
        next.insert(it, e);
    }
    return Graph(node_count(), next, labels_);
}

LoadResult load_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<NodePair> edges;

    auto intern = [&](const std::string& token) {
        auto [it, inserted] = ids.try_emplace(token, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(token);
        return it->second;
    };

    LoadResult result;
    std::string line;
    int line_no = 0;
    std::vector<std::pair<NodeId, NodeId>> raw_ids;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r\n");
        if (start == std::string::npos) continue;
        if (line[start] == '#' || line[start] == '%') continue;
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a >> b) || (ss >> extra)) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected exactly two node tokens");
        }
        NodeId ia = intern(a);
        NodeId ib = intern(b);
        if (ia == ib) {
            ++result.dropped_self_loops;
            continue;
        }
        raw_ids.emplace_back(ia, ib);
    }
    const NodeId n = static_cast<NodeId>(labels.size());
    std::vector<bool> present(pair_count(n), false);
    for (auto [ia, ib] : raw_ids) {
        NodePair p(ia, ib);
        if (present[pair_index(p)]) {
            ++result.dropped_duplicates;
            continue;
        }
        present[pair_index(p)] = true;
        edges.push_back(p);
    }
    if (edges.empty()) throw std::runtime_error("edge list contains no edges");
    result.graph = Graph(n, edges, std::move(labels));
    return result;
}

LoadResult load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (NodePair e : g.edges())
        out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
}

EdgePartition::EdgePartition(const Graph& g, std::vector<NodePair> train,
                             std::vector<NodePair> validation)
    : train_(std::move(train)), validation_(std::move(validation)) {
    std::sort(train_.begin(), train_.end());
    std::sort(validation_.begin(), validation_.end());
    table_.assign(pair_count(g.node_count()), PairClass::Nonexistent);
    for (NodePair p : train_) {
        if (!g.has_edge(p)) throw std::invalid_argument("training pair is not an edge");
        table_[pair_index(p)] = PairClass::Train;
    }
    for (NodePair p : validation_) {
        if (!g.has_edge(p)) throw std::invalid_argument("validation pair is not an edge");
        if (table_[pair_index(p)] == PairClass::Train)
            throw std::invalid_argument("train and validation sets overlap");
        table_[pair_index(p)] = PairClass::Validation;
    }
    if (train_.size() + validation_.size() != g.edge_count())
        throw std::invalid_argument("partition does not cover the edge set");
    train_graph_ = Graph(g.node_count(), train_, g.labels());
}

std::vector<NodePair> EdgePartition::nonexistent() const {
    std::vector<NodePair> out;
    out.reserve(omega_size() - train_.size() - validation_.size());
    const NodeId n = node_count();
    for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            NodePair p(u, v);
            if (table_[pair_index(p)] == PairClass::Nonexistent) out.push_back(p);
        }
    return out;
}

std::vector<NodePair> EdgePartition::unknown() const {
    std::vector<NodePair> out;
    out.reserve(omega_size() - train_.size());
    const NodeId n = node_count();
    for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            NodePair p(u, v);
            if (table_[pair_index(p)] != PairClass::Train) out.push_back(p);
        }
    return out;
}

std::vector<EdgePartition> kfold_split(const Graph& g, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k-fold split needs k >= 2");
    if (static_cast<std::size_t>(k) > g.edge_count())
        throw std::invalid_argument("k-fold split needs at least k edges");

    std::vector<NodePair> shuffled = g.edges();
    Rng rng(Rng::mix(seed, {0x6b666f6c64ULL}));  // "kfold" sub-stream
    rng.shuffle(shuffled);

    const std::size_t q = shuffled.size() / k;
    const std::size_t r = shuffled.size() % k;
    std::vector<EdgePartition> folds;
    folds.reserve(k);
    std::size_t offset = 0;
    for (int i = 0; i < k; ++i) {
        const std::size_t len = q + (static_cast<std::size_t>(i) < r ? 1 : 0);
        std::vector<NodePair> validation(shuffled.begin() + offset,
                                         shuffled.begin() + offset + len);
        std::vector<NodePair> train;
        train.reserve(shuffled.size() - len);
        train.insert(train.end(), shuffled.begin(), shuffled.begin() + offset);
        train.insert(train.end(), shuffled.begin() + offset + len, shuffled.end());
        folds.emplace_back(g, std::move(train), std::move(validation));
        offset += len;
    }
    return folds;
}

void validate_perturbation(const EdgePartition& part, const Perturbation& pert) {
    if (pert.deleted.size() != pert.added.size())
        throw std::invalid_argument("perturbation must delete and add the same number of links");
    std::vector<bool> seen(part.omega_size(), false);
    for (NodePair p : pert.deleted) {
        if (!part.in_train(p))
            throw std::invalid_argument("deleted link is not in the training set");
        if (seen[pair_index(p)]) throw std::invalid_argument("duplicate link in perturbation");
        seen[pair_index(p)] = true;
    }
    for (NodePair p : pert.added) {
        if (!part.in_nonexistent(p))
            throw std::invalid_argument("added link is not in the non-existent set");
        if (seen[pair_index(p)]) throw std::invalid_argument("duplicate link in perturbation");
        seen[pair_index(p)] = true;
    }
}

PerturbedSets apply_perturbation(const EdgePartition& part, const Perturbation& pert) {
    validate_perturbation(part, pert);
    PerturbedSets out;
    std::vector<bool> removed(part.omega_size(), false);
    std::vector<bool> inserted(part.omega_size(), false);
    for (NodePair p : pert.deleted) removed[pair_index(p)] = true;
    for (NodePair p : pert.added) inserted[pair_index(p)] = true;

    const NodeId n = part.node_count();
    out.train.reserve(part.train().size());
    for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            NodePair p(u, v);
            const std::size_t idx = pair_index(p);
            const bool in_train_after =
                inserted[idx] || (part.in_train(p) && !removed[idx]);
            if (in_train_after) {
                out.train.push_back(p);
            } else if (part.in_validation(p)) {
                out.unknown.push_back(p);
            } else {
                out.unknown.push_back(p);
                out.nonexistent.push_back(p);
            }
        }
    out.train_graph = Graph(n, out.train, part.training_graph().labels());
    return out;
}

TopoStats topo_stats(const Graph& g) {
    const NodeId n = g.node_count();
    if (n == 0) throw std::invalid_argument("topo_stats needs a non-empty graph");
    TopoStats s;
    s.n_nodes = static_cast<std::size_t>(n);
    s.n_edges = g.edge_count();
    s.avg_degree = 2.0 * double(s.n_edges) / double(s.n_nodes);

    double c_sum = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const auto nbrs = g.neighbors(v);
        const std::size_t k = nbrs.size();
        if (k < 2) continue;
        std::size_t links = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (g.has_edge(nbrs[i], nbrs[j])) ++links;
        c_sum += 2.0 * double(links) / (double(k) * double(k - 1));
    }
    s.clustering = c_sum / double(n);

    // BFS from every node; distances averaged over connected ordered pairs,
    // which equals the average over unordered pairs.
    std::uint64_t dist_sum = 0, reach = 0;
    std::vector<int> dist(n);
    std::deque<NodeId> queue;
    for (NodeId src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            NodeId x = queue.front();
            queue.pop_front();
            for (NodeId y : g.neighbors(x))
                if (dist[y] < 0) {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
        }
        for (NodeId y = 0; y < n; ++y)
            if (y != src && dist[y] > 0) {
                dist_sum += static_cast<std::uint64_t>(dist[y]);
                ++reach;
            }
    }
    s.avg_distance = reach ? double(dist_sum) / double(reach) : 0.0;
    return s;
}

}  // namespace olp
