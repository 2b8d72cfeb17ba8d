#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace olp {

using NodeId = std::int32_t;

// Unordered node pair, stored canonically with u < v.
struct NodePair {
    NodeId u = 0;
    NodeId v = 0;

    NodePair() = default;
    NodePair(NodeId a, NodeId b) {
        if (a == b) throw std::invalid_argument("node pair with identical endpoints");
        u = a < b ? a : b;
        v = a < b ? b : a;
    }

    friend bool operator==(const NodePair&, const NodePair&) = default;
    friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// Index of a canonical pair in the flattened strict upper triangle of an
// n x n adjacency matrix; pairs of a graph with n nodes occupy [0, n(n-1)/2).
inline std::size_t pair_index(NodePair p) {
    return std::size_t(p.v) * (p.v - 1) / 2 + std::size_t(p.u);
}

inline std::size_t pair_count(NodeId n) {
    return n < 2 ? 0 : std::size_t(n) * (n - 1) / 2;
}

// Immutable simple undirected graph over dense node ids 0..n-1.
// Neighbor lists are kept sorted; original string labels are retained for
// reporting and file round-trips.
class Graph {
public:
    Graph() = default;
    Graph(NodeId n_nodes, std::span<const NodePair> edge_list,
          std::vector<std::string> labels = {});

    NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
    std::size_t edge_count() const { return edges_.size(); }

    int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }

    bool has_edge(NodeId a, NodeId b) const;
    bool has_edge(NodePair p) const { return has_edge(p.u, p.v); }

    // Canonical edges in ascending order.
    const std::vector<NodePair>& edges() const { return edges_; }

    std::string label(NodeId v) const;
    const std::vector<std::string>& labels() const { return labels_; }

    // New graph with `remove` edges deleted and `insert` edges added.
    // Every removed edge must exist and every inserted edge must not.
    Graph with_toggled(std::span<const NodePair> remove,
                       std::span<const NodePair> insert) const;

private:
    std::vector<std::vector<NodeId>> adj_;
    std::vector<NodePair> edges_;
    std::vector<std::string> labels_;
};

struct LoadResult {
    Graph graph;
    int dropped_duplicates = 0;
    int dropped_self_loops = 0;
};

// Reads whitespace-separated "u v" lines; '#' and '%' start comment lines.
// Node tokens are mapped to dense ids in first-appearance order. Duplicate
// edges and self-loops are dropped and counted. Throws on malformed lines
// (with the line number) and on an empty edge set.
LoadResult load_edge_list(std::istream& in);
LoadResult load_edge_list_file(const std::string& path);

// One "label_u label_v" line per edge, in canonical edge order.
void write_edge_list(std::ostream& out, const Graph& g);

enum class PairClass : unsigned char { Train, Validation, Nonexistent };

// The split E = E^T + E^V, with O(1) membership queries over all node pairs.
// U = Omega - E^T and N = Omega - E are derived on demand.
class EdgePartition {
public:
    EdgePartition(const Graph& g, std::vector<NodePair> train,
                  std::vector<NodePair> validation);

    NodeId node_count() const { return train_graph_.node_count(); }
    std::size_t omega_size() const { return pair_count(node_count()); }

    const std::vector<NodePair>& train() const { return train_; }
    const std::vector<NodePair>& validation() const { return validation_; }

    PairClass classify(NodePair p) const { return table_[pair_index(p)]; }
    bool in_train(NodePair p) const { return classify(p) == PairClass::Train; }
    bool in_validation(NodePair p) const { return classify(p) == PairClass::Validation; }
    bool in_nonexistent(NodePair p) const { return classify(p) == PairClass::Nonexistent; }

    std::vector<NodePair> nonexistent() const;  // N, canonical order
    std::vector<NodePair> unknown() const;      // U = N + E^V, canonical order

    // Graph over the training edges only (same node set and labels).
    const Graph& training_graph() const { return train_graph_; }

private:
    std::vector<NodePair> train_, validation_;
    std::vector<PairClass> table_;
    Graph train_graph_;
};

// Splits the edge set into k folds of near-uniform size (the remainder r is
// spread one edge each over the first r folds); partition i uses fold i as
// validation set and the rest as training set. Deterministic given the seed.
std::vector<EdgePartition> kfold_split(const Graph& g, int k, std::uint64_t seed);

// Paired deletion/insertion sets of equal size m; doubles as the chromosome
// payload of the evolutionary searches.
struct Perturbation {
    std::vector<NodePair> deleted;  // subset of E^T
    std::vector<NodePair> added;    // subset of N

    std::size_t size() const { return deleted.size(); }
    bool empty() const { return deleted.empty() && added.empty(); }

    Perturbation inverse() const { return Perturbation{added, deleted}; }
};

// Throws unless deleted is a subset of E^T, added a subset of N, the two sets
// are disjoint and duplicate-free, and |deleted| == |added|.
void validate_perturbation(const EdgePartition& part, const Perturbation& pert);

struct PerturbedSets {
    std::vector<NodePair> train;        // E~^T = E^T - E_del + E_add
    std::vector<NodePair> unknown;      // U~  = U + E_del - E_add
    std::vector<NodePair> nonexistent;  // N~  = N + E_del - E_add
    Graph train_graph;                  // graph over E~^T
};

PerturbedSets apply_perturbation(const EdgePartition& part, const Perturbation& pert);

struct TopoStats {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double avg_degree = 0.0;
    double clustering = 0.0;    // mean of local clustering coefficients
    double avg_distance = 0.0;  // mean shortest-path length over connected pairs
};

TopoStats topo_stats(const Graph& g);

}  // namespace olp
