#include "olp/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace olp {
namespace {

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++count; ++ia; ++ib; }
    }
    return count;
}

// Paths of length 3 between u and v: u - a - b - v with a != b and all four
// vertices distinct on the u/v side (a != v, b != u).
std::size_t path3_count(const Graph& g, NodeId u, NodeId v) {
    std::size_t count = 0;
    for (NodeId a : g.neighbors(u)) {
        if (a == v) continue;
        auto ga = g.neighbors(a);
        auto gv = g.neighbors(v);
        auto ia = ga.begin();
        auto iv = gv.begin();
        while (ia != ga.end() && iv != gv.end()) {
            if (*ia < *iv) ++ia;
            else if (*iv < *ia) ++iv;
            else {
                if (*ia != u) ++count;  // b == a is impossible, b != v by simplicity
                ++ia;
                ++iv;
            }
        }
    }
    return count;
}

}  // namespace

std::string SimilarityIndex::name() const {
    switch (kind) {
        case IndexKind::RA: return "RA";
        case IndexKind::CN: return "CN";
        case IndexKind::Jaccard: return "Jaccard";
        case IndexKind::PA: return "PA";
        case IndexKind::AA: return "AA";
        case IndexKind::LP: return "LP";
    }
    return "?";
}

SimilarityIndex SimilarityIndex::parse(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (upper == "RA") return {IndexKind::RA};
    if (upper == "CN") return {IndexKind::CN};
    if (upper == "JACCARD") return {IndexKind::Jaccard};
    if (upper == "PA") return {IndexKind::PA};
    if (upper == "AA") return {IndexKind::AA};
    if (upper == "LP") return {IndexKind::LP, 0.5};
    if (upper.rfind("LP:", 0) == 0) {
        double damping = std::stod(upper.substr(3));
        if (!(damping > 0.0 && damping <= 1.0))
            throw std::invalid_argument("LP damping must be in (0, 1]");
        return {IndexKind::LP, damping};
    }
    throw std::invalid_argument("unknown similarity index: " + std::string(text));
}

ScoreTable::ScoreTable(SimilarityIndex index, NodeId n_nodes)
    : index_(index), n_(n_nodes), values_(pair_count(n_nodes), 0.0),
      member_(pair_count(n_nodes), false) {}

double ScoreTable::at(NodePair p) const {
    const std::size_t idx = pair_index(p);
    if (!member_[idx]) throw std::out_of_range("pair is not in the scored set");
    return values_[idx];
}

void ScoreTable::set(NodePair p, double score) {
    const std::size_t idx = pair_index(p);
    if (!member_[idx]) {
        member_[idx] = true;
        ++count_;
    }
    values_[idx] = score;
}

void ScoreTable::erase(NodePair p) {
    const std::size_t idx = pair_index(p);
    if (member_[idx]) {
        member_[idx] = false;
        values_[idx] = 0.0;
        --count_;
    }
}

std::vector<NodePair> ScoreTable::pairs() const {
    std::vector<NodePair> out;
    out.reserve(count_);
    for_each([&](NodePair p, double) { out.push_back(p); });
    return out;
}

void ScoreTable::write_csv(std::ostream& out, const Graph& g) const {
    out << "u,v,score\n";
    char buf[64];
    for_each([&](NodePair p, double score) {
        std::snprintf(buf, sizeof buf, "%.12g", score);
        out << g.label(p.u) << ',' << g.label(p.v) << ',' << buf << '\n';
    });
}

double score_pair(const Graph& g, const SimilarityIndex& index, NodePair p) {
    const NodeId u = p.u, v = p.v;
    const auto gu = g.neighbors(u);
    const auto gv = g.neighbors(v);
    switch (index.kind) {
        case IndexKind::RA: {
            // Summation in ascending common-neighbor order keeps equal sums
            // bit-identical across call sites.
            double sum = 0.0;
            auto ia = gu.begin();
            auto ib = gv.begin();
            while (ia != gu.end() && ib != gv.end()) {
                if (*ia < *ib) ++ia;
                else if (*ib < *ia) ++ib;
                else {
                    sum += 1.0 / double(g.degree(*ia));
                    ++ia;
                    ++ib;
                }
            }
            return sum;
        }
        case IndexKind::CN:
            return double(intersection_size(gu, gv));
        case IndexKind::Jaccard: {
            const std::size_t cn = intersection_size(gu, gv);
            const std::size_t uni = gu.size() + gv.size() - cn;
            return uni == 0 ? 0.0 : double(cn) / double(uni);
        }
        case IndexKind::PA:
            return double(gu.size()) * double(gv.size());
        case IndexKind::AA: {
            double sum = 0.0;
            auto ia = gu.begin();
            auto ib = gv.begin();
            while (ia != gu.end() && ib != gv.end()) {
                if (*ia < *ib) ++ia;
                else if (*ib < *ia) ++ib;
                else {
                    // A degree-1 common neighbor contributes 0 (ln 1 = 0).
                    const int d = g.degree(*ia);
                    if (d > 1) sum += 1.0 / std::log(double(d));
                    ++ia;
                    ++ib;
                }
            }
            return sum;
        }
        case IndexKind::LP:
            return double(intersection_size(gu, gv)) +
                   index.lp_damping * double(path3_count(g, u, v));
    }
    throw std::logic_error("unreachable");
}

ScoreTable score_all(const Graph& g, const SimilarityIndex& index,
                     std::span<const NodePair> pairs) {
    ScoreTable table(index, g.node_count());
    for (NodePair p : pairs) table.set(p, score_pair(g, index, p));
    return table;
}

std::vector<NodePair> affected_pairs(const Graph& g, NodePair toggled) {
    return affected_pairs_all(g, std::span<const NodePair>(&toggled, 1), {});
}

std::vector<NodePair> affected_pairs_all(const Graph& g,
                                         std::span<const NodePair> deleted,
                                         std::span<const NodePair> added) {
    // Widened neighborhood per touched node: base neighbors plus every
    // toggle partner.
    std::unordered_map<NodeId, std::vector<NodeId>> extra;
    auto note = [&](NodePair p) {
        extra[p.u].push_back(p.v);
        extra[p.v].push_back(p.u);
    };
    for (NodePair p : deleted) note(p);
    for (NodePair p : added) note(p);

    std::vector<bool> seen(pair_count(g.node_count()), false);
    std::vector<NodePair> out;
    auto push = [&](NodePair p) {
        const std::size_t idx = pair_index(p);
        if (!seen[idx]) {
            seen[idx] = true;
            out.push_back(p);
        }
    };

    for (NodePair p : deleted) push(p);
    for (NodePair p : added) push(p);

    std::vector<NodeId> hood;
    for (auto& [z, partners] : extra) {
        hood.assign(g.neighbors(z).begin(), g.neighbors(z).end());
        hood.insert(hood.end(), partners.begin(), partners.end());
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        for (std::size_t i = 0; i < hood.size(); ++i)
            for (std::size_t j = i + 1; j < hood.size(); ++j)
                push(NodePair(hood[i], hood[j]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

ScoreTable incremental_rescore(const ScoreTable& base, const Graph& graph_before,
                               const Perturbation& pert) {
    if (base.index().kind != IndexKind::RA)
        throw std::invalid_argument("incremental rescoring supports the RA index only");
    ScoreTable table = base;
    if (pert.empty()) return table;

    const Graph after = graph_before.with_toggled(pert.deleted, pert.added);

    // Membership shifts mirror the U/N set updates: deleted links become
    // candidate pairs, added links stop being candidates.
    for (NodePair p : pert.deleted) table.set(p, 0.0);
    for (NodePair p : pert.added) table.erase(p);

    for (NodePair p : affected_pairs_all(graph_before, pert.deleted, pert.added))
        if (table.contains(p)) table.set(p, score_pair(after, base.index(), p));
    return table;
}

}  // namespace olp
