#include "olp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "olp/baselines.hpp"

namespace olp {
namespace {

const std::vector<std::string> kMethods = {"noop", "rlr", "rls", "hp", "ga", "eda"};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::size_t m_for(double proportion, const EdgePartition& part) {
    const auto m = std::size_t(proportion * double(part.train().size()));
    return std::max<std::size_t>(m, 1);
}

// RLS needs an even edit count; one swap edits two links per side.
std::size_t even_down(std::size_t m) { return m < 2 ? 2 : m - m % 2; }

}  // namespace

std::string path_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

double default_alpha_for(const std::string& network) {
    if (network == "bomb") return 1.0;
    if (network == "jazz") return 0.0;
    return 0.01;
}

void ExperimentConfig::validate() const {
    if (dataset.empty()) throw std::invalid_argument("config: dataset path is required");
    if (std::find(kMethods.begin(), kMethods.end(), method) == kMethods.end())
        throw std::invalid_argument("config: unknown method '" + method + "'");
    if (attacks.empty()) throw std::invalid_argument("config: at least one attack index");
    if (method != "noop") {
        if (proportions.empty())
            throw std::invalid_argument("config: at least one proportion");
        for (double p : proportions)
            if (!(p > 0.0 && p <= 0.25))
                throw std::invalid_argument("config: proportions must lie in (0, 0.25]");
    }
    if (folds < 2) throw std::invalid_argument("config: folds must be >= 2");
    if (repeats < 0) throw std::invalid_argument("config: repeats must be >= 0");
}

int ExperimentConfig::effective_repeats() const {
    if (repeats > 0) return repeats;
    if (method == "noop") return 1;
    if (method == "ga" || method == "eda") return 5;
    return 100;
}

double ExperimentConfig::effective_alpha() const {
    return alpha ? *alpha : default_alpha_for(network);
}

Perturbation run_defense(const std::string& method, const EdgePartition& part,
                         std::size_t m, double alpha, const EvoParams& evo_template,
                         std::uint64_t seed, EvoArtifact* artifact) {
    if (method == "noop") return Perturbation{};
    if (method == "rlr") return rlr(part, BaselineParams{m, seed});
    if (method == "rls") return rls(part, BaselineParams{even_down(m), seed});
    if (method == "hp") {
        Perturbation pert = hp(part, m);
        if (pert.deleted.size() < m || pert.added.size() < m) {
            Rng rng(Rng::mix(seed, {0x706164ULL}));  // "pad"
            const std::size_t padded = pad_to_m(part, pert, m, rng);
            std::fprintf(stderr, "hp: padded %zu link(s) with random edits\n", padded);
        }
        return pert;
    }
    if (method == "ga" || method == "eda") {
        EvoParams params = evo_template;
        params.m = m;
        params.alpha = alpha;
        params.seed = seed;
        FitnessContext ctx(part, alpha);
        const auto started = std::chrono::steady_clock::now();
        EvoRunResult run = method == "ga" ? ga_run(ctx, params) : eda_run(ctx, params);
        if (artifact) {
            artifact->params = params;
            artifact->wall_clock_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            artifact->result = run;
        }
        return run.best.perturbation();
    }
    throw std::invalid_argument("unknown defense method '" + method + "'");
}

std::vector<EvalResult> evaluate_defense(const Graph& g,
                                         const std::vector<EdgePartition>& folds,
                                         const std::string& method, double proportion,
                                         double alpha, const EvoParams& evo_template,
                                         const SimilarityIndex& attack,
                                         std::uint64_t seed, int repeats) {
    if (folds.empty()) throw std::invalid_argument("no folds to evaluate");
    for (const EdgePartition& part : folds)
        if (part.node_count() != g.node_count())
            throw std::invalid_argument("fold does not match the graph");
    std::vector<EvalResult> out;
    for (std::size_t fold = 0; fold < folds.size(); ++fold) {
        const EdgePartition& part = folds[fold];
        const std::size_t m = m_for(proportion, part);
        double precision = 0.0, auc = 0.0;
        const int reps = method == "noop" ? 1 : repeats;
        for (int rep = 0; rep < reps; ++rep) {
            const std::uint64_t run_seed = Rng::mix(seed, {fold, std::uint64_t(rep)});
            const Perturbation pert =
                run_defense(method, part, m, alpha, evo_template, run_seed);
            const EvalResult one = evaluate_attack(part, pert, attack);
            precision += one.precision;
            auc += one.auc;
        }
        EvalResult res;
        res.precision = precision / double(reps);
        res.auc = auc / double(reps);
        res.method = method;
        res.index = attack;
        res.proportion = proportion;
        res.fold = int(fold);
        res.seed = seed;
        out.push_back(res);
    }
    return out;
}

EvalResult mean_of(std::span<const EvalResult> results) {
    if (results.empty()) throw std::invalid_argument("mean of no results");
    EvalResult mean = results.front();
    mean.fold = -1;
    mean.precision = 0.0;
    mean.auc = 0.0;
    for (const EvalResult& r : results) {
        mean.precision += r.precision;
        mean.auc += r.auc;
    }
    mean.precision /= double(results.size());
    mean.auc /= double(results.size());
    return mean;
}

int worker_count() {
    if (const char* env = std::getenv("OLP_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

SweepOutput run_sweep(const Graph& g, const ExperimentConfig& config) {
    config.validate();
    const std::string network =
        config.network.empty() ? path_stem(config.dataset) : config.network;
    const double alpha = config.alpha ? *config.alpha : default_alpha_for(network);
    const int repeats = config.effective_repeats();
    const bool evo = config.method == "ga" || config.method == "eda";
    const bool keep_artifacts = evo && !config.artifacts.empty();

    const std::vector<EdgePartition> folds = kfold_split(g, config.folds, config.seed);
    const std::vector<double> proportions =
        config.method == "noop" ? std::vector<double>{0.0} : config.proportions;

    struct Job {
        std::size_t prop_idx, fold, repeat;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < proportions.size(); ++p)
        for (std::size_t f = 0; f < folds.size(); ++f)
            for (std::size_t r = 0; r < std::size_t(repeats); ++r)
                jobs.push_back({p, f, r});

    SweepOutput out;
    out.rows.resize(jobs.size() * config.attacks.size());
    if (keep_artifacts) out.artifacts.resize(jobs.size());

    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            const std::size_t j = cursor.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job job = jobs[j];
            const EdgePartition& part = folds[job.fold];
            const double prop = proportions[job.prop_idx];
            const std::size_t m = m_for(prop, part);
            const std::uint64_t run_seed =
                Rng::mix(config.seed, {job.prop_idx, job.fold, job.repeat,
                                       std::hash<std::string>{}(config.method)});
            EvoArtifact artifact;
            const Perturbation pert =
                config.method == "noop"
                    ? Perturbation{}
                    : run_defense(config.method, part, m, alpha, config.evo, run_seed,
                                  keep_artifacts ? &artifact : nullptr);
            for (std::size_t a = 0; a < config.attacks.size(); ++a) {
                EvalResult res = evaluate_attack(part, pert, config.attacks[a]);
                RunRecord& row = out.rows[j * config.attacks.size() + a];
                row.network = network;
                row.method = config.method;
                row.index = config.attacks[a];
                row.proportion = prop;
                row.fold = int(job.fold);
                row.repeat = int(job.repeat);
                row.precision = res.precision;
                row.auc = res.auc;
                row.seed = run_seed;
            }
            if (keep_artifacts) {
                artifact.network = network;
                artifact.method = config.method;
                artifact.proportion = prop;
                artifact.fold = int(job.fold);
                artifact.repeat = int(job.repeat);
                out.artifacts[j] = std::move(artifact);
            }
        }
    };

    const int workers = std::min<int>(worker_count(), int(jobs.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (int t = 0; t < workers; ++t) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    return out;
}

void write_results_csv(std::ostream& out, std::span<const RunRecord> rows) {
    out << "network,method,attack_index,proportion,fold,precision,auc,seed\n";
    for (const RunRecord& r : rows) {
        out << r.network << ',' << r.method << ',' << r.index.name() << ','
            << fmt(r.proportion) << ',' << r.fold << ',' << fmt(r.precision) << ','
            << fmt(r.auc) << ',' << r.seed << '\n';
    }
}

std::string summary_json(std::span<const RunRecord> rows) {
    struct Acc {
        std::vector<double> precision, auc;
    };
    std::map<std::string, std::map<std::string, std::map<std::string, Acc>>> grouped;
    for (const RunRecord& r : rows) {
        Acc& acc = grouped[r.method][r.index.name()][fmt(r.proportion)];
        acc.precision.push_back(r.precision);
        acc.auc.push_back(r.auc);
    }
    auto stats = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= double(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / double(xs.size() - 1) : 0.0;
        return std::pair<double, double>{mean, std::sqrt(var)};
    };

    nlohmann::json root;
    for (const auto& [method, by_index] : grouped)
        for (const auto& [index, by_prop] : by_index)
            for (const auto& [prop, acc] : by_prop) {
                const auto [pm, ps] = stats(acc.precision);
                const auto [am, as] = stats(acc.auc);
                root[method][index][prop] = {
                    {"precision_mean", pm}, {"precision_std", ps},
                    {"auc_mean", am},       {"auc_std", as},
                    {"runs", acc.precision.size()},
                };
            }
    return root.dump(2);
}

std::string artifact_json(const EvoArtifact& artifact, const Graph& g) {
    nlohmann::json j;
    j["network"] = artifact.network;
    j["method"] = artifact.method;
    j["proportion"] = artifact.proportion;
    j["fold"] = artifact.fold;
    j["repeat"] = artifact.repeat;
    j["params"] = {
        {"alpha", artifact.params.alpha},
        {"m", artifact.params.m},
        {"n_iteration", artifact.params.n_iteration},
        {"n_elite", artifact.params.n_elite},
        {"n_crossover", artifact.params.n_crossover},
        {"n_mutation", artifact.params.n_mutation},
        {"pc", artifact.params.pc},
        {"pm", artifact.params.pm},
        {"n_estimation", artifact.params.n_estimation},
        {"n_eda", artifact.params.n_eda},
        {"seed", artifact.params.seed},
        {"convergence_patience", artifact.params.convergence_patience},
    };
    j["best_fitness"] = artifact.result.best_fitness;
    j["generations"] = artifact.result.generations;
    j["history"] = artifact.result.history;
    nlohmann::json del = nlohmann::json::array();
    for (NodePair p : artifact.result.best.genes_del)
        del.push_back({g.label(p.u), g.label(p.v)});
    nlohmann::json add = nlohmann::json::array();
    for (NodePair p : artifact.result.best.genes_add)
        add.push_back({g.label(p.u), g.label(p.v)});
    j["chromosome"] = {{"del", del}, {"add", add}};
    j["wall_clock_s"] = artifact.wall_clock_s;
    return j.dump(2);
}

}  // namespace olp
