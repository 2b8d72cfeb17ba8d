#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "olp/graph.hpp"
#include "olp/rng.hpp"

namespace olp {

struct BaselineParams {
    std::size_t m = 1;       // links deleted (= links inserted)
    std::uint64_t seed = 0;
    int repeats = 1;         // averaging runs, consumed by the experiment layer
};

// Caps m at a quarter of the training set; the perturbation is supposed to
// stay sparse relative to E^T.
std::size_t max_perturbation_size(const EdgePartition& part);

// Random link rewiring: delete a uniform m-subset of E^T, insert a uniform
// m-subset of N.
Perturbation rlr(const EdgePartition& part, const BaselineParams& params);

// Random link swapping: m/2 degree-preserving swaps on the training graph.
// Each swap removes two training edges (i,u), (j,v) and inserts (i,v), (j,u);
// a candidate swap that would create an existing link, a hidden link, or a
// self-loop is discarded and redrawn (up to 1000 attempts per swap).
// Requires m even.
Perturbation rls(const EdgePartition& part, const BaselineParams& params);

// Greedy heuristic perturbation: one pass over all node pairs in descending
// RA order (computed once on the unperturbed training graph), deleting and
// inserting links per the membership of each visited pair. Deterministic.
// May return fewer than m edits per side when candidates run out.
Perturbation hp(const EdgePartition& part, std::size_t m);

// Tops up a short perturbation with random RLR-style edits so that both
// sides reach exactly m. Returns the number of padded links per side.
std::size_t pad_to_m(const EdgePartition& part, Perturbation& pert, std::size_t m,
                     Rng& rng);

// Working state of the heuristic pass, exposed so the two link editors can
// be driven directly. Membership routing uses the original partition; edit
// validity uses the evolving training graph.
class HpState {
public:
    explicit HpState(const EdgePartition& part);

    // Deletes the visited pair when it is a (still existing) training link;
    // for a hidden pair, deletes the training link between its lowest-degree
    // common neighbor and its highest-degree endpoint, if that link exists.
    std::optional<NodePair> delete_link(NodePair p);

    // For a hidden pair, connects its two lowest-degree common neighbors;
    // for a non-existent pair, connects the lowest-degree exclusive neighbor
    // to the endpoint it is not yet adjacent to. Insertions must land in N.
    std::optional<NodePair> add_link(NodePair p);

    const std::vector<NodePair>& deleted() const { return deleted_; }
    const std::vector<NodePair>& added() const { return added_; }

    int degree(NodeId v) const { return int(adj_[v].size()); }
    bool has_edge(NodePair p) const;

private:
    void remove_edge(NodePair p);
    void insert_edge(NodePair p);

    const EdgePartition& part_;
    std::vector<std::vector<NodeId>> adj_;  // evolving training adjacency
    std::vector<NodePair> deleted_, added_;
};

// Two-section text format, "DEL u v" and "ADD u v" lines with node labels.
void write_perturbation(std::ostream& out, const Graph& g, const Perturbation& pert);
Perturbation read_perturbation(std::istream& in, const Graph& g);

}  // namespace olp
