#include "olp/baselines.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "olp/similarity.hpp"

namespace olp {
namespace {

constexpr int kSwapRetryBudget = 1000;

// m distinct elements of `pool`, in draw order (Floyd's algorithm).
std::vector<NodePair> sample_distinct(std::span<const NodePair> pool, std::size_t m,
                                      Rng& rng) {
    if (m > pool.size()) throw std::invalid_argument("sample larger than candidate pool");
    std::vector<NodePair> out;
    out.reserve(m);
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t j = pool.size() - m; j < pool.size(); ++j) {
        std::size_t t = rng.below(j + 1);
        if (taken[t]) t = j;
        taken[t] = true;
        out.push_back(pool[t]);
    }
    return out;
}

// Feasibility only; the sparsity cap (m at most a quarter of E^T) is policed
// at the experiment-configuration layer so that tiny hand-built instances can
// still be exercised directly.
void check_m(const EdgePartition& part, std::size_t m) {
    if (m < 1) throw std::invalid_argument("perturbation size m must be >= 1");
    if (m > part.train().size())
        throw std::invalid_argument("m exceeds the training set");
}

}  // namespace

std::size_t max_perturbation_size(const EdgePartition& part) {
    return part.train().size() / 4;
}

Perturbation rlr(const EdgePartition& part, const BaselineParams& params) {
    check_m(part, params.m);
    const std::vector<NodePair> pool_n = part.nonexistent();
    if (params.m > pool_n.size())
        throw std::invalid_argument("not enough non-existent pairs to insert");
    Rng rng(params.seed);
    Perturbation pert;
    pert.deleted = sample_distinct(part.train(), params.m, rng);
    pert.added = sample_distinct(pool_n, params.m, rng);
    return pert;
}

Perturbation rls(const EdgePartition& part, const BaselineParams& params) {
    check_m(part, params.m);
    if (params.m % 2 != 0) throw std::invalid_argument("link swapping needs an even m");

    Rng rng(params.seed);
    // Current training edges; swaps only ever remove original training links
    // and only ever insert links from the original N, so the running diff
    // against the original partition is exactly the perturbation.
    std::vector<NodePair> current = part.train();
    std::vector<bool> removed(part.omega_size(), false);
    std::vector<bool> inserted(part.omega_size(), false);

    auto exists_now = [&](NodePair p) {
        if (inserted[pair_index(p)]) return true;
        return part.in_train(p) && !removed[pair_index(p)];
    };

    Perturbation pert;
    for (std::size_t swap = 0; swap < params.m / 2; ++swap) {
        bool done = false;
        for (int attempt = 0; attempt < kSwapRetryBudget && !done; ++attempt) {
            const std::size_t a = rng.below(current.size());
            const std::size_t b = rng.below(current.size());
            if (a == b) continue;
            NodePair e1 = current[a], e2 = current[b];
            // Random orientation of the first edge decides the pairing.
            NodeId i = e1.u, u = e1.v;
            if (rng.chance(0.5)) std::swap(i, u);
            NodeId j = e2.u, v = e2.v;
            if (rng.chance(0.5)) std::swap(j, v);
            if (i == v || j == u) continue;
            NodePair n1(i, v), n2(j, u);
            if (n1 == n2) continue;
            // New links must come from the original N and not exist now.
            if (!part.in_nonexistent(n1) || !part.in_nonexistent(n2)) continue;
            if (exists_now(n1) || exists_now(n2)) continue;
            // Only original training links may be removed.
            if (inserted[pair_index(e1)] || inserted[pair_index(e2)]) continue;

            removed[pair_index(e1)] = true;
            removed[pair_index(e2)] = true;
            inserted[pair_index(n1)] = true;
            inserted[pair_index(n2)] = true;
            pert.deleted.push_back(e1);
            pert.deleted.push_back(e2);
            pert.added.push_back(n1);
            pert.added.push_back(n2);
            const std::size_t hi = std::max(a, b), lo = std::min(a, b);
            current[hi] = n2;
            current[lo] = n1;
            done = true;
        }
        if (!done)
            throw std::runtime_error("link swapping exhausted its retry budget");
    }
    return pert;
}

HpState::HpState(const EdgePartition& part) : part_(part) {
    const Graph& g = part.training_graph();
    adj_.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        adj_[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
}

bool HpState::has_edge(NodePair p) const {
    const auto& nbrs = adj_[p.u];
    return std::binary_search(nbrs.begin(), nbrs.end(), p.v);
}

void HpState::remove_edge(NodePair p) {
    auto drop = [&](NodeId a, NodeId b) {
        auto& nbrs = adj_[a];
        nbrs.erase(std::lower_bound(nbrs.begin(), nbrs.end(), b));
    };
    drop(p.u, p.v);
    drop(p.v, p.u);
    deleted_.push_back(p);
}

void HpState::insert_edge(NodePair p) {
    auto put = [&](NodeId a, NodeId b) {
        auto& nbrs = adj_[a];
        nbrs.insert(std::lower_bound(nbrs.begin(), nbrs.end(), b), b);
    };
    put(p.u, p.v);
    put(p.v, p.u);
    added_.push_back(p);
}

std::optional<NodePair> HpState::delete_link(NodePair p) {
    if (part_.in_train(p)) {
        if (!has_edge(p)) return std::nullopt;  // already deleted earlier
        remove_edge(p);
        return p;
    }
    if (part_.in_validation(p)) {
        // Lowest-degree common neighbor vs highest-degree endpoint; ties
        // break toward the smaller node id.
        NodeId k = -1;
        const auto& nu = adj_[p.u];
        const auto& nv = adj_[p.v];
        auto iu = nu.begin();
        auto iv = nv.begin();
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv) ++iu;
            else if (*iv < *iu) ++iv;
            else {
                if (k < 0 || degree(*iu) < degree(k)) k = *iu;
                ++iu;
                ++iv;
            }
        }
        if (k < 0) return std::nullopt;
        const NodeId l = degree(p.v) > degree(p.u) ? p.v : p.u;
        NodePair cut(k, l);
        if (!part_.in_train(cut) || !has_edge(cut)) return std::nullopt;
        remove_edge(cut);
        return cut;
    }
    return std::nullopt;
}

std::optional<NodePair> HpState::add_link(NodePair p) {
    auto addable = [&](NodePair q) { return part_.in_nonexistent(q) && !has_edge(q); };

    if (part_.in_validation(p)) {
        // Two lowest-degree common neighbors (by degree, then id).
        NodeId k = -1, l = -1;
        const auto& nu = adj_[p.u];
        const auto& nv = adj_[p.v];
        auto iu = nu.begin();
        auto iv = nv.begin();
        auto better = [&](NodeId cand, NodeId cur) {
            return cur < 0 || degree(cand) < degree(cur) ||
                   (degree(cand) == degree(cur) && cand < cur);
        };
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv) ++iu;
            else if (*iv < *iu) ++iv;
            else {
                const NodeId z = *iu;
                if (better(z, k)) {
                    l = k;
                    k = z;
                } else if (better(z, l)) {
                    l = z;
                }
                ++iu;
                ++iv;
            }
        }
        if (k < 0 || l < 0) return std::nullopt;
        NodePair link(k, l);
        if (!addable(link)) return std::nullopt;
        insert_edge(link);
        return link;
    }
    if (part_.in_nonexistent(p)) {
        // An earlier insertion may have created this very pair; it is no
        // longer a candidate then and there is nothing to raise.
        if (has_edge(p)) return std::nullopt;
        // Lowest-degree neighbor of exactly one endpoint; connect it to the
        // other endpoint so it becomes a common neighbor of the pair.
        NodeId k = -1;
        bool k_adj_u = false;
        auto consider = [&](NodeId z, bool adj_u) {
            if (z == p.u || z == p.v) return;
            if (k < 0 || degree(z) < degree(k) || (degree(z) == degree(k) && z < k)) {
                k = z;
                k_adj_u = adj_u;
            }
        };
        const auto& nu = adj_[p.u];
        const auto& nv = adj_[p.v];
        for (NodeId z : nu)
            if (!std::binary_search(nv.begin(), nv.end(), z)) consider(z, true);
        for (NodeId z : nv)
            if (!std::binary_search(nu.begin(), nu.end(), z)) consider(z, false);
        if (k < 0) return std::nullopt;
        const NodeId other = k_adj_u ? p.v : p.u;
        NodePair link(k, other);
        if (!addable(link)) return std::nullopt;
        insert_edge(link);
        return link;
    }
    return std::nullopt;
}

Perturbation hp(const EdgePartition& part, std::size_t m) {
    check_m(part, m);

    // RA over all of Omega on the unperturbed training graph, sorted once.
    const Graph& g = part.training_graph();
    std::vector<std::pair<double, NodePair>> ranked;
    ranked.reserve(part.omega_size());
    const SimilarityIndex ra{IndexKind::RA};
    for (NodeId u = 0; u + 1 < g.node_count(); ++u)
        for (NodeId v = u + 1; v < g.node_count(); ++v) {
            NodePair p(u, v);
            ranked.emplace_back(score_pair(g, ra, p), p);
        }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    HpState state(part);
    for (const auto& [score, pair] : ranked) {
        const PairClass cls = part.classify(pair);
        if (cls == PairClass::Train || cls == PairClass::Validation) {
            if (state.deleted().size() < m) {
                state.delete_link(pair);
                continue;
            }
        }
        if (cls == PairClass::Validation || cls == PairClass::Nonexistent) {
            if (state.added().size() < m) state.add_link(pair);
        }
        if (state.deleted().size() == m && state.added().size() == m) break;
    }
    return Perturbation{state.deleted(), state.added()};
}

std::size_t pad_to_m(const EdgePartition& part, Perturbation& pert, std::size_t m,
                     Rng& rng) {
    if (pert.deleted.size() > m || pert.added.size() > m)
        throw std::invalid_argument("perturbation already larger than m");
    std::vector<bool> used(part.omega_size(), false);
    for (NodePair p : pert.deleted) used[pair_index(p)] = true;
    for (NodePair p : pert.added) used[pair_index(p)] = true;

    std::size_t padded = 0;
    const std::size_t need_del = m - pert.deleted.size();
    if (need_del > 0) {
        std::vector<NodePair> pool;
        for (NodePair p : part.train())
            if (!used[pair_index(p)]) pool.push_back(p);
        for (NodePair p : sample_distinct(pool, need_del, rng)) {
            used[pair_index(p)] = true;
            pert.deleted.push_back(p);
            ++padded;
        }
    }
    const std::size_t need_add = m - pert.added.size();
    if (need_add > 0) {
        std::vector<NodePair> pool;
        for (NodePair p : part.nonexistent())
            if (!used[pair_index(p)]) pool.push_back(p);
        for (NodePair p : sample_distinct(pool, need_add, rng)) {
            used[pair_index(p)] = true;
            pert.added.push_back(p);
            ++padded;
        }
    }
    return padded;
}

void write_perturbation(std::ostream& out, const Graph& g, const Perturbation& pert) {
    for (NodePair p : pert.deleted)
        out << "DEL " << g.label(p.u) << ' ' << g.label(p.v) << '\n';
    for (NodePair p : pert.added)
        out << "ADD " << g.label(p.u) << ' ' << g.label(p.v) << '\n';
}

Perturbation read_perturbation(std::istream& in, const Graph& g) {
    std::unordered_map<std::string, NodeId> ids;
    for (NodeId v = 0; v < g.node_count(); ++v) ids[g.label(v)] = v;

    Perturbation pert;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r\n");
        if (start == std::string::npos) continue;
        if (line[start] == '#' || line[start] == '%') continue;
        std::istringstream ss(line);
        std::string op, a, b;
        if (!(ss >> op >> a >> b))
            throw std::runtime_error("perturbation line " + std::to_string(line_no) +
                                     ": expected 'DEL|ADD u v'");
        auto ia = ids.find(a);
        auto ib = ids.find(b);
        if (ia == ids.end() || ib == ids.end())
            throw std::runtime_error("perturbation line " + std::to_string(line_no) +
                                     ": unknown node label");
        NodePair p(ia->second, ib->second);
        if (op == "DEL") pert.deleted.push_back(p);
        else if (op == "ADD") pert.added.push_back(p);
        else
            throw std::runtime_error("perturbation line " + std::to_string(line_no) +
                                     ": unknown operation '" + op + "'");
    }
    return pert;
}

}  // namespace olp
