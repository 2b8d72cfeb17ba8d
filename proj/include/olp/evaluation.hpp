#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "olp/graph.hpp"
#include "olp/similarity.hpp"

namespace olp {

// One attack evaluation: how well the similarity index recovers the hidden
// validation links from the released (possibly perturbed) training graph.
struct EvalResult {
    double precision = 0.0;
    double auc = 0.0;
    std::string method;
    SimilarityIndex index;
    double proportion = 0.0;
    int fold = 0;
    std::uint64_t seed = 0;
};

// Sorts the scored pairs by descending score (ties: ascending canonical
// pair), takes the top k as predictions and returns the fraction of
// validation links among them. The divisor is |validation| when
// k == |validation| (the usual setting) and k otherwise.
double precision_at_k(const ScoreTable& table, std::span<const NodePair> validation,
                      std::size_t k);

// Exact AUC: the probability that a random validation link outscores a
// random non-existent pair, ties counted half. Computed by sorting rather
// than the quadratic double loop, but arithmetically identical to it.
double auc_score(const ScoreTable& table, std::span<const NodePair> validation,
                 std::span<const NodePair> nonexistent);

// Scores the unknown pairs of a perturbed partition under `index` and
// evaluates precision (k = |E^V|) and AUC against the validation links.
EvalResult evaluate_attack(const EdgePartition& part, const Perturbation& pert,
                           const SimilarityIndex& index);

}  // namespace olp
