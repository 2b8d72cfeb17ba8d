#include "olp/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

namespace olp {

double precision_at_k(const ScoreTable& table, std::span<const NodePair> validation,
                      std::size_t k) {
    if (k == 0) throw std::invalid_argument("precision needs k >= 1");
    if (k > table.size()) throw std::invalid_argument("k exceeds the scored set");

    std::vector<std::pair<double, NodePair>> ranked;
    ranked.reserve(table.size());
    table.for_each([&](NodePair p, double s) { ranked.emplace_back(s, p); });
    auto better = [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end(), better);

    std::vector<NodePair> hidden(validation.begin(), validation.end());
    std::sort(hidden.begin(), hidden.end());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (std::binary_search(hidden.begin(), hidden.end(), ranked[i].second)) ++hits;

    const std::size_t divisor = k == hidden.size() ? hidden.size() : k;
    return double(hits) / double(divisor);
}

double auc_score(const ScoreTable& table, std::span<const NodePair> validation,
                 std::span<const NodePair> nonexistent) {
    if (validation.empty() || nonexistent.empty())
        throw std::invalid_argument("AUC needs non-empty validation and non-existent sets");

    std::vector<double> neg;
    neg.reserve(nonexistent.size());
    for (NodePair p : nonexistent) neg.push_back(table.at(p));
    std::sort(neg.begin(), neg.end());

    std::uint64_t greater2_plus_equal = 0;  // 2*n_> + n_=
    for (NodePair p : validation) {
        const double s = table.at(p);
        const auto lo = std::lower_bound(neg.begin(), neg.end(), s);
        const auto hi = std::upper_bound(lo, neg.end(), s);
        greater2_plus_equal += 2 * std::uint64_t(lo - neg.begin()) + std::uint64_t(hi - lo);
    }
    const double n = double(validation.size()) * double(nonexistent.size());
    return double(greater2_plus_equal) / (2.0 * n);
}

EvalResult evaluate_attack(const EdgePartition& part, const Perturbation& pert,
                           const SimilarityIndex& index) {
    const PerturbedSets sets = apply_perturbation(part, pert);
    const ScoreTable table = score_all(sets.train_graph, index, sets.unknown);
    EvalResult res;
    res.index = index;
    res.precision = precision_at_k(table, part.validation(), part.validation().size());
    res.auc = auc_score(table, part.validation(), sets.nonexistent);
    return res;
}

}  // namespace olp
