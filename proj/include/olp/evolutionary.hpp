#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "olp/graph.hpp"
#include "olp/rng.hpp"
#include "olp/similarity.hpp"

namespace olp {

// Search individual: m links to delete (from E^T) and m links to insert
// (from N), plus the cached fitness once evaluated.
struct Chromosome {
    std::vector<NodePair> genes_del;
    std::vector<NodePair> genes_add;
    std::optional<double> fitness;

    std::size_t m() const { return genes_del.size(); }
    Perturbation perturbation() const { return Perturbation{genes_del, genes_add}; }
};

struct EvoParams {
    double alpha = 0.01;          // weight of the precision-oriented term
    std::size_t m = 1;            // deleted/inserted links per chromosome
    int n_iteration = 1000;
    int n_elite = 10;
    int n_crossover = 50;
    int n_mutation = 50;
    double pc = 0.7;
    double pm = 0.1;
    int n_estimation = 250;
    int n_eda = 50;
    std::uint64_t seed = 0;
    int convergence_patience = 100;  // stop when the best is stuck this long

    int ga_population() const { return n_elite + n_crossover + n_mutation; }
    int eda_population() const { return n_elite + n_eda + n_mutation; }
    void validate() const;
};

// Candidate gene pools of one fold: the training links and the non-existent
// pairs.
struct GenePools {
    std::vector<NodePair> train_edges;
    std::vector<NodePair> nonexistent;
};

// Per-fold context for fitness evaluation. Holds the unperturbed training
// graph, its full RA table, and the order statistics needed to evaluate the
// fitness of a chromosome by rescoring only the pairs a perturbation can
// touch. Not safe for concurrent calls; use one context per worker.
class FitnessContext {
public:
    FitnessContext(const EdgePartition& part, double alpha);

    // Fitness of Eq-style objective:
    //   alpha * |{ n in N~ : RA_n > max_{l in E^V} RA_l }|
    //   + ( mean_{n in N~} RA_n - mean_{l in E^V} RA_l )
    // computed on the perturbed training graph via incremental rescoring.
    double fitness(const Chromosome& chrom) const;

    double alpha() const { return alpha_; }
    const EdgePartition& partition() const { return part_; }
    const GenePools& pools() const { return pools_; }

    // Instrumentation: pairs rescored by the incremental path and the number
    // of fitness evaluations, cumulative.
    std::size_t rescored_pairs() const { return rescored_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    double ra_current(NodePair p) const;

    EdgePartition part_;
    double alpha_;
    GenePools pools_;

    std::vector<double> base_;             // RA over all of Omega, training graph
    std::vector<NodePair> validation_;     // sorted
    std::vector<double> validation_base_;  // base scores, same order
    std::vector<double> n_sorted_;         // base scores of N, ascending
    long double n_sum_ = 0.0L;             // sum of base scores over N
    std::size_t n_size_ = 0;

    // Scratch reused across evaluations.
    mutable std::vector<std::vector<NodeId>> adj_;
    mutable std::vector<bool> pair_seen_;
    mutable std::vector<unsigned char> toggle_mark_;  // 1 deleted, 2 added
    mutable std::size_t rescored_ = 0;
    mutable std::size_t evaluations_ = 0;
};

// Roulette-wheel sampling with replacement; weights are exp(f - max f), so
// probabilities match exp(f) without overflow. Returns indices into the
// fitness span.
std::vector<std::size_t> roulette_select(std::span<const double> fitness,
                                         std::size_t count, Rng& rng);

// Single-point crossover at one shared cut position per gene section. A gene
// whose exchange would collide with a gene already present in the receiving
// chromosome retreats (both copies stay where they were). With probability
// 1 - pc the parents are returned unchanged.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double pc, Rng& rng);

// Deterministic core of `crossover`: exchanges the tails [cut, m) of both
// sections, applying the retreat rule.
std::pair<Chromosome, Chromosome> crossover_at_cut(const Chromosome& a,
                                                   const Chromosome& b,
                                                   std::size_t cut);

// Replaces each gene with probability pm by a fresh uniform draw from its
// pool, redrawing on collision with the rest of the chromosome.
Chromosome mutate(const Chromosome& chrom, double pm, const GenePools& pools, Rng& rng);

// EDA resampling: estimates one empirical gene distribution per section from
// the selected chromosomes and draws n_eda new individuals from them,
// without within-chromosome repetition. When a section's support is smaller
// than m it is padded with uniform candidates; *padded_genes reports how
// many genes came from the padding.
std::vector<Chromosome> eda_generate_population(std::span<const Chromosome> selected,
                                                std::size_t n_eda, std::size_t m,
                                                const GenePools& pools, Rng& rng,
                                                std::size_t* padded_genes = nullptr);

struct EvoRunResult {
    Chromosome best;
    double best_fitness = 0.0;
    std::vector<double> history;  // best fitness per generation
    int generations = 0;
};

EvoRunResult ga_run(const FitnessContext& ctx, const EvoParams& params);
EvoRunResult eda_run(const FitnessContext& ctx, const EvoParams& params);

}  // namespace olp
