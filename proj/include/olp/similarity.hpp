#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "olp/graph.hpp"

namespace olp {

enum class IndexKind { RA, CN, Jaccard, PA, AA, LP };

// Local similarity index. lp_damping is the weight of length-3 paths and is
// only meaningful for LP.
struct SimilarityIndex {
    IndexKind kind = IndexKind::RA;
    double lp_damping = 0.5;

    std::string name() const;
    static SimilarityIndex parse(std::string_view text);

    friend bool operator==(const SimilarityIndex& a, const SimilarityIndex& b) {
        return a.kind == b.kind && (a.kind != IndexKind::LP || a.lp_damping == b.lp_damping);
    }
};

// Similarity values for a set of node pairs under one index. Backed by a
// flat array over all of Omega plus a membership mask, so lookups and
// incremental updates are O(1).
class ScoreTable {
public:
    ScoreTable() = default;
    ScoreTable(SimilarityIndex index, NodeId n_nodes);

    const SimilarityIndex& index() const { return index_; }
    NodeId node_count() const { return n_; }
    std::size_t size() const { return count_; }

    bool contains(NodePair p) const { return member_[pair_index(p)]; }
    double at(NodePair p) const;

    void set(NodePair p, double score);
    void erase(NodePair p);

    // Scored pairs in canonical order.
    std::vector<NodePair> pairs() const;

    // Calls fn(pair, score) for every scored pair in canonical order.
    template <class F>
    void for_each(F&& fn) const {
        for (NodeId u = 0; u + 1 < n_; ++u)
            for (NodeId v = u + 1; v < n_; ++v) {
                NodePair p(u, v);
                if (member_[pair_index(p)]) fn(p, values_[pair_index(p)]);
            }
    }

    // CSV with header "u,v,score", canonical pair order, 12 significant digits.
    void write_csv(std::ostream& out, const Graph& g) const;

private:
    SimilarityIndex index_;
    NodeId n_ = 0;
    std::size_t count_ = 0;
    std::vector<double> values_;
    std::vector<bool> member_;
};

// Similarity of one node pair (the pair need not be an edge).
double score_pair(const Graph& g, const SimilarityIndex& index, NodePair p);

ScoreTable score_all(const Graph& g, const SimilarityIndex& index,
                     std::span<const NodePair> pairs);

// Superset of the node pairs whose RA value can change when the edge (i,j)
// is deleted or inserted: the toggled pair itself plus all pairs inside the
// one-hop neighborhoods of i and j (neighborhoods taken as the union of the
// states before and after the toggle).
std::vector<NodePair> affected_pairs(const Graph& g, NodePair toggled);

// Same superset for a whole perturbation applied at once. Neighbor sets are
// widened per node by every toggle partner so that interactions between
// toggles are covered.
std::vector<NodePair> affected_pairs_all(const Graph& g,
                                         std::span<const NodePair> deleted,
                                         std::span<const NodePair> added);

// Rescores an RA table after a perturbation without recomputing untouched
// pairs. Membership is adjusted like the U/N sets of a partition: deleted
// links enter the scored set, added links leave it. The result equals a full
// recomputation over the perturbed graph. Throws for non-RA tables.
ScoreTable incremental_rescore(const ScoreTable& base, const Graph& graph_before,
                               const Perturbation& pert);

}  // namespace olp
