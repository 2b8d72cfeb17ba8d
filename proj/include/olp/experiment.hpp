#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "olp/evaluation.hpp"
#include "olp/evolutionary.hpp"
#include "olp/graph.hpp"
#include "olp/similarity.hpp"

namespace olp {

// Everything a sweep needs; CLI flags and config-file keys mirror these
// fields one to one.
struct ExperimentConfig {
    std::string dataset;                       // edge list path
    std::string network;                       // defaults to the file stem
    std::string method = "noop";               // noop|rlr|rls|hp|ga|eda
    std::vector<SimilarityIndex> attacks = {SimilarityIndex{IndexKind::RA}};
    std::vector<double> proportions = {0.01, 0.02, 0.03, 0.04, 0.05,
                                       0.06, 0.07, 0.08, 0.09, 0.10};
    std::optional<double> alpha;               // unset: per-network default
    int folds = 10;
    int repeats = 0;                           // 0: method default
    std::uint64_t seed = 1;
    std::string out;                           // output prefix
    std::string artifacts;                     // optional dir for per-run JSON
    EvoParams evo;                             // n_iteration etc.; seed/m/alpha filled per run

    void validate() const;
    int effective_repeats() const;
    double effective_alpha() const;
};

// Fitness weight used in the experiments when none is given explicitly:
// 1 for bomb, 0 for jazz, 0.01 otherwise.
double default_alpha_for(const std::string& network);

// One result row of a sweep.
struct RunRecord {
    std::string network;
    std::string method;
    SimilarityIndex index;
    double proportion = 0.0;
    int fold = 0;
    int repeat = 0;
    double precision = 0.0;
    double auc = 0.0;
    std::uint64_t seed = 0;
};

// Per-run artifact of an evolutionary search.
struct EvoArtifact {
    std::string network, method;
    double proportion = 0.0;
    int fold = 0, repeat = 0;
    EvoParams params;
    EvoRunResult result;
    double wall_clock_s = 0.0;
};

// Runs one defense on one fold. m is derived from the proportion outside.
// For ga/eda the optional artifact output captures the run.
Perturbation run_defense(const std::string& method, const EdgePartition& part,
                         std::size_t m, double alpha, const EvoParams& evo_template,
                         std::uint64_t seed, EvoArtifact* artifact = nullptr);

// Cross-validated attack evaluation of one defense configuration: one
// EvalResult per fold (each averaged over `repeats` runs of the defense).
std::vector<EvalResult> evaluate_defense(const Graph& g,
                                         const std::vector<EdgePartition>& folds,
                                         const std::string& method, double proportion,
                                         double alpha, const EvoParams& evo_template,
                                         const SimilarityIndex& attack,
                                         std::uint64_t seed, int repeats);

EvalResult mean_of(std::span<const EvalResult> results);

// Full sweep over proportions x folds x repeats x attacks, executed by a
// bounded worker pool (OLP_WORKERS) and reported in deterministic grid order.
struct SweepOutput {
    std::vector<RunRecord> rows;
    std::vector<EvoArtifact> artifacts;
};
SweepOutput run_sweep(const Graph& g, const ExperimentConfig& config);

void write_results_csv(std::ostream& out, std::span<const RunRecord> rows);
std::string summary_json(std::span<const RunRecord> rows);
std::string artifact_json(const EvoArtifact& artifact, const Graph& g);

int worker_count();

std::string path_stem(const std::string& path);

}  // namespace olp
