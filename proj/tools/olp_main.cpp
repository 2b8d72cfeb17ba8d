#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "olp/baselines.hpp"
#include "olp/experiment.hpp"

namespace fs = std::filesystem;
using namespace olp;

namespace {

std::vector<SimilarityIndex> parse_attacks(const std::vector<std::string>& names) {
    std::vector<SimilarityIndex> out;
    for (const std::string& name : names) out.push_back(SimilarityIndex::parse(name));
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

struct CommonFlags {
    std::string dataset;
    std::string network;
    std::uint64_t seed = 1;
    int folds = 10;
    std::string out;

    void attach(CLI::App* cmd, bool need_out = false) {
        cmd->add_option("--dataset", dataset, "edge list file")->required();
        cmd->add_option("--network", network, "network name (default: file stem)");
        cmd->add_option("--seed", seed, "master RNG seed");
        cmd->add_option("--folds", folds, "cross-validation folds");
        auto* opt = cmd->add_option("--out", out, "output path prefix");
        if (need_out) opt->required();
    }

    std::string name() const { return network.empty() ? path_stem(dataset) : network; }
};

void attach_evo_flags(CLI::App* cmd, EvoParams& evo) {
    cmd->add_option("--iterations", evo.n_iteration, "generation cap");
    cmd->add_option("--elite", evo.n_elite, "elites kept per generation");
    cmd->add_option("--crossover-n", evo.n_crossover, "chromosomes for crossover");
    cmd->add_option("--mutation-n", evo.n_mutation, "chromosomes for mutation");
    cmd->add_option("--pc", evo.pc, "crossover rate");
    cmd->add_option("--pm", evo.pm, "mutation rate");
    cmd->add_option("--estimation-n", evo.n_estimation, "EDA estimation sample");
    cmd->add_option("--eda-n", evo.n_eda, "EDA offspring per generation");
    cmd->add_option("--patience", evo.convergence_patience,
                    "generations without improvement before stopping");
}

void emit_sweep(const ExperimentConfig& config, const Graph& g,
                const SweepOutput& sweep, const std::string& csv_name) {
    std::ostringstream csv;
    write_results_csv(csv, sweep.rows);
    if (config.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(config.out + csv_name, csv.str());
        write_text(config.out + "_summary.json", summary_json(sweep.rows) + "\n");
    }
    if (!config.artifacts.empty() && !sweep.artifacts.empty()) {
        fs::create_directories(config.artifacts);
        for (const EvoArtifact& a : sweep.artifacts) {
            char name[160];
            std::snprintf(name, sizeof name, "%s_%s_p%.4f_f%02d_r%02d.json",
                          a.network.c_str(), a.method.c_str(), a.proportion, a.fold,
                          a.repeat);
            write_text((fs::path(config.artifacts) / name).string(),
                       artifact_json(a, g) + "\n");
        }
    }
}

int cmd_stats(const CommonFlags& flags) {
    const LoadResult loaded = load_edge_list_file(flags.dataset);
    if (loaded.dropped_duplicates || loaded.dropped_self_loops)
        std::cerr << "dropped " << loaded.dropped_duplicates << " duplicate and "
                  << loaded.dropped_self_loops << " self-loop line(s)\n";
    const TopoStats s = topo_stats(loaded.graph);
    std::ostringstream row;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.3f,%.3f,%.3f", flags.name().c_str(),
                  s.n_nodes, s.n_edges, s.avg_degree, s.clustering, s.avg_distance);
    row << "network,nodes,edges,avg_degree,clustering,avg_distance\n" << buf << '\n';
    if (flags.out.empty()) std::cout << row.str();
    else write_text(flags.out, row.str());
    return 0;
}

int cmd_split(const CommonFlags& flags) {
    const Graph g = load_edge_list_file(flags.dataset).graph;
    const auto folds = kfold_split(g, flags.folds, flags.seed);
    std::ostringstream csv;
    csv << "fold,u,v\n";
    for (std::size_t f = 0; f < folds.size(); ++f)
        for (NodePair p : folds[f].validation())
            csv << f << ',' << g.label(p.u) << ',' << g.label(p.v) << '\n';
    if (flags.out.empty()) std::cout << csv.str();
    else write_text(flags.out, csv.str());
    return 0;
}

int cmd_defend(ExperimentConfig config) {
    config.network = config.network.empty() ? path_stem(config.dataset) : config.network;
    config.validate();
    const Graph g = load_edge_list_file(config.dataset).graph;
    const SweepOutput sweep = run_sweep(g, config);
    emit_sweep(config, g, sweep, ".csv");
    return 0;
}

int cmd_alpha_sweep(ExperimentConfig config, std::vector<double> alphas) {
    if (config.method != "ga" && config.method != "eda")
        throw CLI::ValidationError("alpha-sweep", "method must be ga or eda");
    config.network = config.network.empty() ? path_stem(config.dataset) : config.network;
    config.validate();
    const Graph g = load_edge_list_file(config.dataset).graph;

    std::ostringstream csv;
    csv << "network,method,attack_index,alpha,proportion,fold,precision,auc,seed\n";
    nlohmann::json summary;
    for (double alpha : alphas) {
        ExperimentConfig c = config;
        c.alpha = alpha;
        const SweepOutput sweep = run_sweep(g, c);
        char abuf[32];
        std::snprintf(abuf, sizeof abuf, "%g", alpha);
        for (const RunRecord& r : sweep.rows) {
            char line[256];
            std::snprintf(line, sizeof line, "%s,%s,%s,%s,%.10g,%d,%.10g,%.10g,%llu",
                          r.network.c_str(), r.method.c_str(), r.index.name().c_str(),
                          abuf, r.proportion, r.fold, r.precision, r.auc,
                          (unsigned long long)r.seed);
            csv << line << '\n';
        }
        double pmean = 0.0, amean = 0.0;
        for (const RunRecord& r : sweep.rows) {
            pmean += r.precision;
            amean += r.auc;
        }
        pmean /= double(sweep.rows.size());
        amean /= double(sweep.rows.size());
        summary[abuf] = {{"precision_mean", pmean}, {"auc_mean", amean}};
    }
    if (config.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(config.out + ".csv", csv.str());
        write_text(config.out + "_summary.json", summary.dump(2) + "\n");
    }
    return 0;
}

int cmd_transfer(ExperimentConfig config, double proportion, const std::string& pert_dir) {
    config.network = config.network.empty() ? path_stem(config.dataset) : config.network;
    const Graph g = load_edge_list_file(config.dataset).graph;
    const auto folds = kfold_split(g, config.folds, config.seed);
    const double alpha = config.effective_alpha();
    const std::vector<SimilarityIndex> indices = {
        {IndexKind::RA}, {IndexKind::CN}, {IndexKind::Jaccard},
        {IndexKind::PA}, {IndexKind::AA}, {IndexKind::LP, 0.5}};

    // One optimized perturbation per fold for HP and EDA, persisted so other
    // index evaluations (and later runs) reuse the exact same edits.
    const fs::path store = pert_dir.empty()
                               ? fs::path(config.out + "_perturbations")
                               : fs::path(pert_dir);
    fs::create_directories(store);
    auto stored = [&](const std::string& method, std::size_t fold) {
        char name[128];
        std::snprintf(name, sizeof name, "%s_%s_f%02zu.txt", config.network.c_str(),
                      method.c_str(), fold);
        return store / name;
    };

    std::map<std::string, std::vector<Perturbation>> fixed;
    for (const std::string& method : {std::string("hp"), std::string("eda")}) {
        auto& per_fold = fixed[method];
        for (std::size_t f = 0; f < folds.size(); ++f) {
            const fs::path file = stored(method, f);
            if (fs::exists(file)) {
                std::ifstream in(file);
                per_fold.push_back(read_perturbation(in, g));
                continue;
            }
            const std::size_t m =
                std::max<std::size_t>(1, std::size_t(proportion *
                                                     double(folds[f].train().size())));
            const std::uint64_t run_seed = Rng::mix(config.seed, {f, 0ULL,
                std::hash<std::string>{}(method)});
            Perturbation pert =
                run_defense(method, folds[f], m, alpha, config.evo, run_seed);
            auto out = open_out(file.string());
            write_perturbation(out, g, pert);
            per_fold.push_back(std::move(pert));
        }
    }

    const int rand_repeats = config.repeats > 0 ? config.repeats : 100;
    std::vector<RunRecord> rows;
    for (const SimilarityIndex& index : indices) {
        for (const std::string& method :
             {std::string("original"), std::string("rlr"), std::string("rls"),
              std::string("hp"), std::string("eda")}) {
            for (std::size_t f = 0; f < folds.size(); ++f) {
                const EdgePartition& part = folds[f];
                const std::size_t m = std::max<std::size_t>(
                    1, std::size_t(proportion * double(part.train().size())));
                double pmean = 0.0, amean = 0.0;
                int reps = 1;
                if (method == "original") {
                    const EvalResult res = evaluate_attack(part, Perturbation{}, index);
                    pmean = res.precision;
                    amean = res.auc;
                } else if (method == "rlr" || method == "rls") {
                    reps = rand_repeats;
                    for (int rep = 0; rep < reps; ++rep) {
                        const std::uint64_t run_seed = Rng::mix(
                            config.seed, {f, std::uint64_t(rep),
                                          std::hash<std::string>{}(method)});
                        const Perturbation pert =
                            method == "rlr"
                                ? rlr(part, BaselineParams{m, run_seed})
                                : rls(part, BaselineParams{m < 2 ? 2 : m - m % 2,
                                                           run_seed});
                        const EvalResult res = evaluate_attack(part, pert, index);
                        pmean += res.precision;
                        amean += res.auc;
                    }
                    pmean /= reps;
                    amean /= reps;
                } else {
                    const EvalResult res =
                        evaluate_attack(part, fixed[method][f], index);
                    pmean = res.precision;
                    amean = res.auc;
                }
                RunRecord row;
                row.network = config.network;
                row.method = method;
                row.index = index;
                row.proportion = method == "original" ? 0.0 : proportion;
                row.fold = int(f);
                row.precision = pmean;
                row.auc = amean;
                row.seed = config.seed;
                rows.push_back(row);
            }
        }
    }

    std::ostringstream csv;
    write_results_csv(csv, rows);
    if (config.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(config.out + ".csv", csv.str());
        write_text(config.out + "_summary.json", summary_json(rows) + "\n");
    }
    return 0;
}

int cmd_replay(const CommonFlags& flags, const std::string& pert_file, int fold,
               const std::vector<std::string>& attack_names) {
    const Graph g = load_edge_list_file(flags.dataset).graph;
    const auto folds = kfold_split(g, flags.folds, flags.seed);
    if (fold < 0 || fold >= int(folds.size()))
        throw CLI::ValidationError("replay", "fold index out of range");
    std::ifstream in(pert_file);
    if (!in) throw std::runtime_error("cannot read " + pert_file);
    const Perturbation pert = read_perturbation(in, g);
    validate_perturbation(folds[fold], pert);

    std::vector<RunRecord> rows;
    for (const SimilarityIndex& index : parse_attacks(attack_names)) {
        const EvalResult res = evaluate_attack(folds[fold], pert, index);
        RunRecord row;
        row.network = flags.name();
        row.method = "replay";
        row.index = index;
        row.proportion = double(pert.size()) / double(folds[fold].train().size());
        row.fold = fold;
        row.precision = res.precision;
        row.auc = res.auc;
        row.seed = flags.seed;
        rows.push_back(row);
    }
    std::ostringstream csv;
    write_results_csv(csv, rows);
    if (flags.out.empty()) std::cout << csv.str();
    else write_text(flags.out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link perturbation workbench: hide sensitive links from "
                 "similarity-based link prediction"};
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.require_subcommand(1);

    // stats
    CommonFlags stats_flags;
    auto* stats = app.add_subcommand("stats", "topological statistics of a dataset");
    stats_flags.attach(stats);

    // split
    CommonFlags split_flags;
    auto* split = app.add_subcommand("split", "emit the k-fold validation sets");
    split_flags.attach(split);

    // defend
    ExperimentConfig defend_config;
    std::vector<std::string> defend_attacks = {"RA"};
    auto* defend = app.add_subcommand("defend", "run a defense sweep and evaluate");
    defend->add_option("--dataset", defend_config.dataset, "edge list file")->required();
    defend->add_option("--network", defend_config.network, "network name");
    defend->add_option("--method", defend_config.method,
                       "noop|rlr|rls|hp|ga|eda")->required();
    defend->add_option("--attack", defend_attacks, "attack indices")->delimiter(',');
    defend->add_option("--proportion", defend_config.proportions,
                       "perturbation proportions of |E^T|")->delimiter(',');
    double defend_alpha = -1.0;
    defend->add_option("--alpha", defend_alpha, "fitness weight (default: per network)");
    defend->add_option("--folds", defend_config.folds, "cross-validation folds");
    defend->add_option("--repeats", defend_config.repeats,
                       "runs per fold (0: method default)");
    defend->add_option("--seed", defend_config.seed, "master RNG seed");
    defend->add_option("--out", defend_config.out, "output prefix");
    defend->add_option("--artifacts", defend_config.artifacts,
                       "directory for per-run JSON records (ga/eda)");
    attach_evo_flags(defend, defend_config.evo);

    // alpha-sweep
    ExperimentConfig sweep_config;
    std::vector<double> sweep_alphas = {0.0, 0.01, 0.1, 1.0};
    auto* alpha_sweep =
        app.add_subcommand("alpha-sweep", "sweep the fitness weight at one proportion");
    alpha_sweep->add_option("--dataset", sweep_config.dataset, "edge list file")
        ->required();
    alpha_sweep->add_option("--network", sweep_config.network, "network name");
    sweep_config.method = "eda";
    alpha_sweep->add_option("--method", sweep_config.method, "ga|eda");
    alpha_sweep->add_option("--alphas", sweep_alphas, "alpha values")->delimiter(',');
    sweep_config.proportions = {0.06};
    alpha_sweep->add_option("--proportion", sweep_config.proportions,
                            "proportion (default 0.06)")->delimiter(',');
    alpha_sweep->add_option("--folds", sweep_config.folds, "cross-validation folds");
    alpha_sweep->add_option("--repeats", sweep_config.repeats,
                            "runs per fold (0: method default)");
    alpha_sweep->add_option("--seed", sweep_config.seed, "master RNG seed");
    alpha_sweep->add_option("--out", sweep_config.out, "output prefix");
    attach_evo_flags(alpha_sweep, sweep_config.evo);

    // transfer
    ExperimentConfig transfer_config;
    double transfer_proportion = 0.10;
    std::string transfer_store;
    auto* transfer = app.add_subcommand(
        "transfer", "evaluate saved RA-optimized perturbations under all indices");
    transfer->add_option("--dataset", transfer_config.dataset, "edge list file")
        ->required();
    transfer->add_option("--network", transfer_config.network, "network name");
    transfer->add_option("--proportion", transfer_proportion,
                         "maximum perturbation proportion (default 0.10)");
    double transfer_alpha = -1.0;
    transfer->add_option("--alpha", transfer_alpha, "fitness weight");
    transfer->add_option("--folds", transfer_config.folds, "cross-validation folds");
    transfer->add_option("--repeats", transfer_config.repeats,
                         "rlr/rls averaging runs (default 100)");
    transfer->add_option("--seed", transfer_config.seed, "master RNG seed");
    transfer->add_option("--out", transfer_config.out, "output prefix")->required();
    transfer->add_option("--perturbations", transfer_store,
                         "directory for persisted perturbations");
    attach_evo_flags(transfer, transfer_config.evo);

    // replay
    CommonFlags replay_flags;
    std::string replay_file;
    int replay_fold = 0;
    std::vector<std::string> replay_attacks = {"RA"};
    auto* replay =
        app.add_subcommand("replay", "apply a saved perturbation file and evaluate");
    replay_flags.attach(replay);
    replay->add_option("--perturbation", replay_file, "DEL/ADD file")->required();
    replay->add_option("--fold", replay_fold, "fold index the file belongs to");
    replay->add_option("--attack", replay_attacks, "attack indices")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats->parsed()) return cmd_stats(stats_flags);
        if (split->parsed()) return cmd_split(split_flags);
        if (defend->parsed()) {
            if (defend_alpha >= 0.0) defend_config.alpha = defend_alpha;
            defend_config.attacks = parse_attacks(defend_attacks);
            return cmd_defend(defend_config);
        }
        if (alpha_sweep->parsed()) {
            sweep_config.attacks = {SimilarityIndex{IndexKind::RA}};
            return cmd_alpha_sweep(sweep_config, sweep_alphas);
        }
        if (transfer->parsed()) {
            if (transfer_alpha >= 0.0) transfer_config.alpha = transfer_alpha;
            return cmd_transfer(transfer_config, transfer_proportion, transfer_store);
        }
        if (replay->parsed())
            return cmd_replay(replay_flags, replay_file, replay_fold, replay_attacks);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
