#include "olp/evolutionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace olp {
namespace {

struct PairHash {
    std::size_t operator()(NodePair p) const {
        return std::hash<std::uint64_t>{}((std::uint64_t(p.u) << 32) | std::uint32_t(p.v));
    }
};

using PairSet = std::unordered_set<NodePair, PairHash>;

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

}  // namespace

void EvoParams::validate() const {
    if (m < 1) throw std::invalid_argument("chromosome length m must be >= 1");
    if (n_elite < 0 || n_crossover < 0 || n_mutation < 0 || n_eda < 0 ||
        n_estimation < 1 || n_iteration < 1)
        throw std::invalid_argument("population counts must be non-negative");
    if (ga_population() < 2 || eda_population() < 2)
        throw std::invalid_argument("population size must be at least 2");
    if (pc < 0.0 || pc > 1.0 || pm < 0.0 || pm > 1.0)
        throw std::invalid_argument("pc and pm must lie in [0, 1]");
    if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (convergence_patience < 1)
        throw std::invalid_argument("convergence patience must be >= 1");
}

FitnessContext::FitnessContext(const EdgePartition& part, double alpha)
    : part_(part), alpha_(alpha) {
    const Graph& g = part_.training_graph();
    const NodeId n = g.node_count();

    pools_.train_edges = part_.train();
    pools_.nonexistent = part_.nonexistent();

    base_.assign(pair_count(n), 0.0);
    const SimilarityIndex ra{IndexKind::RA};
    for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            NodePair p(u, v);
            base_[pair_index(p)] = score_pair(g, ra, p);
        }

    validation_ = part_.validation();
    validation_base_.reserve(validation_.size());
    for (NodePair p : validation_) validation_base_.push_back(base_[pair_index(p)]);

    n_sorted_.reserve(pools_.nonexistent.size());
    for (NodePair p : pools_.nonexistent) {
        const double s = base_[pair_index(p)];
        n_sorted_.push_back(s);
        n_sum_ += s;
    }
    std::sort(n_sorted_.begin(), n_sorted_.end());
    n_size_ = n_sorted_.size();

    adj_.resize(n);
    for (NodeId v = 0; v < n; ++v)
        adj_[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    pair_seen_.assign(pair_count(n), false);
    toggle_mark_.assign(pair_count(n), 0);
}

double FitnessContext::ra_current(NodePair p) const {
    const auto& nu = adj_[p.u];
    const auto& nv = adj_[p.v];
    double sum = 0.0;
    auto iu = nu.begin();
    auto iv = nv.begin();
    while (iu != nu.end() && iv != nv.end()) {
        if (*iu < *iv) ++iu;
        else if (*iv < *iu) ++iv;
        else {
            sum += 1.0 / double(adj_[*iu].size());
            ++iu;
            ++iv;
        }
    }
    return sum;
}

double FitnessContext::fitness(const Chromosome& chrom) const {
    if (chrom.genes_del.size() != chrom.genes_add.size())
        throw std::invalid_argument("chromosome sections differ in length");

    // Validate genes and mark toggles.
    for (NodePair p : chrom.genes_del) {
        if (!part_.in_train(p))
            throw std::invalid_argument("deleted gene is not a training link");
        auto& mark = toggle_mark_[pair_index(p)];
        if (mark) throw std::invalid_argument("duplicate gene in chromosome");
        mark = 1;
    }
    for (NodePair p : chrom.genes_add) {
        if (!part_.in_nonexistent(p))
            throw std::invalid_argument("added gene is not a non-existent pair");
        auto& mark = toggle_mark_[pair_index(p)];
        if (mark) throw std::invalid_argument("duplicate gene in chromosome");
        mark = 2;
    }

    auto drop_edge = [&](NodePair p) {
        auto& a = adj_[p.u];
        a.erase(std::lower_bound(a.begin(), a.end(), p.v));
        auto& b = adj_[p.v];
        b.erase(std::lower_bound(b.begin(), b.end(), p.u));
    };
    auto put_edge = [&](NodePair p) {
        auto& a = adj_[p.u];
        a.insert(std::lower_bound(a.begin(), a.end(), p.v), p.v);
        auto& b = adj_[p.v];
        b.insert(std::lower_bound(b.begin(), b.end(), p.u), p.u);
    };
    for (NodePair p : chrom.genes_del) drop_edge(p);
    for (NodePair p : chrom.genes_add) put_edge(p);

    // Walk the affected superset once. Pairs are deduplicated with a bitmap;
    // only pairs whose value feeds the fitness are rescored.
    std::vector<std::size_t> seen_idx;
    std::vector<std::pair<std::size_t, double>> ev_override;  // validation slot -> score
    std::vector<std::pair<double, double>> n_changed;         // base, new (pairs still in N)
    std::vector<double> del_new;                              // scores of deleted links

    auto visit = [&](NodePair p) {
        const std::size_t idx = pair_index(p);
        if (pair_seen_[idx]) return;
        pair_seen_[idx] = true;
        seen_idx.push_back(idx);
        const unsigned char mark = toggle_mark_[idx];
        if (mark == 2) return;  // added link: leaves the candidate set
        const PairClass cls = part_.classify(p);
        if (cls == PairClass::Validation) {
            const double s = ra_current(p);
            ++rescored_;
            const auto it = std::lower_bound(validation_.begin(), validation_.end(), p);
            ev_override.emplace_back(std::size_t(it - validation_.begin()), s);
        } else if (mark == 1) {
            const double s = ra_current(p);
            ++rescored_;
            del_new.push_back(s);
        } else if (cls == PairClass::Nonexistent) {
            const double s = ra_current(p);
            ++rescored_;
            n_changed.emplace_back(base_[idx], s);
        }
    };

    for (NodePair p : chrom.genes_del) visit(p);
    for (NodePair p : chrom.genes_add) visit(p);

    // Widened one-hop neighborhoods around every touched node.
    std::unordered_map<NodeId, std::vector<NodeId>> extra;
    for (NodePair p : chrom.genes_del) {
        extra[p.u].push_back(p.v);
        extra[p.v].push_back(p.u);
    }
    for (NodePair p : chrom.genes_add) {
        extra.try_emplace(p.u);
        extra.try_emplace(p.v);
    }
    std::vector<NodeId> hood;
    for (auto& [z, deleted_partners] : extra) {
        hood.assign(adj_[z].begin(), adj_[z].end());
        hood.insert(hood.end(), deleted_partners.begin(), deleted_partners.end());
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        for (std::size_t i = 0; i < hood.size(); ++i)
            for (std::size_t j = i + 1; j < hood.size(); ++j)
                visit(NodePair(hood[i], hood[j]));
    }

    // Validation-side statistics under overrides.
    long double ev_sum = 0.0L;
    double ev_max = -1.0;
    {
        // Apply overrides into a scratch copy of the base scores.
        static thread_local std::vector<double> ev_scratch;
        ev_scratch = validation_base_;
        for (auto [slot, s] : ev_override) ev_scratch[slot] = s;
        for (double s : ev_scratch) {
            ev_sum += s;
            if (s > ev_max) ev_max = s;
        }
    }
    const double threshold = ev_max;
    const long double mean_ev = ev_sum / (long double)(validation_.size());

    // Candidate-side count and mean via the base order statistics plus the
    // recorded deltas.
    long long above = (long long)(n_sorted_.end() -
                                  std::upper_bound(n_sorted_.begin(), n_sorted_.end(),
                                                   threshold));
    long double sum_n = n_sum_;
    for (auto [base_s, new_s] : n_changed) {
        sum_n += (long double)new_s - (long double)base_s;
        above += (new_s > threshold) - (base_s > threshold);
    }
    for (double s : del_new) {
        sum_n += s;
        above += (s > threshold);
    }
    for (NodePair p : chrom.genes_add) {
        const double b = base_[pair_index(p)];
        sum_n -= b;
        above -= (b > threshold);
    }
    const long double mean_n = sum_n / (long double)n_size_;

    // Revert scratch state.
    for (NodePair p : chrom.genes_add) drop_edge(p);
    for (NodePair p : chrom.genes_del) put_edge(p);
    for (std::size_t idx : seen_idx) pair_seen_[idx] = false;
    for (NodePair p : chrom.genes_del) toggle_mark_[pair_index(p)] = 0;
    for (NodePair p : chrom.genes_add) toggle_mark_[pair_index(p)] = 0;
    ++evaluations_;

    return alpha_ * double(above) + double(mean_n - mean_ev);
}

std::vector<std::size_t> roulette_select(std::span<const double> fitness,
                                         std::size_t count, Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("empty population");
    const double peak = *std::max_element(fitness.begin(), fitness.end());
    std::vector<long double> cumulative(fitness.size());
    long double total = 0.0L;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        total += std::exp((long double)(fitness[i] - peak));
        cumulative[i] = total;
    }
    std::vector<std::size_t> picks;
    picks.reserve(count);
    for (std::size_t d = 0; d < count; ++d) {
        const long double r = (long double)rng.real() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        picks.push_back(std::min<std::size_t>(it - cumulative.begin(), fitness.size() - 1));
    }
    return picks;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double pc, Rng& rng) {
    if (a.m() != b.m()) throw std::invalid_argument("parents differ in length");
    if (a.m() < 2) return {a, b};
    if (!rng.chance(pc)) return {a, b};
    return crossover_at_cut(a, b, 1 + rng.below(a.m() - 1));
}

std::pair<Chromosome, Chromosome> crossover_at_cut(const Chromosome& a,
                                                   const Chromosome& b,
                                                   std::size_t cut) {
    if (a.m() != b.m()) throw std::invalid_argument("parents differ in length");
    if (cut < 1 || cut >= a.m()) throw std::invalid_argument("cut out of range");
    Chromosome ca = a, cb = b;
    const std::size_t m = a.m();
    bool changed = false;
    auto cross_section = [&](std::vector<NodePair>& ga, std::vector<NodePair>& gb) {
        PairSet in_a(ga.begin(), ga.end());
        PairSet in_b(gb.begin(), gb.end());
        for (std::size_t pos = cut; pos < m; ++pos) {
            NodePair xa = ga[pos], xb = gb[pos];
            if (xa == xb) continue;
            // Retreat on collision: the incoming gene must not duplicate one
            // already present in the receiving chromosome.
            if (in_a.count(xb) || in_b.count(xa)) continue;
            in_a.erase(xa);
            in_a.insert(xb);
            in_b.erase(xb);
            in_b.insert(xa);
            std::swap(ga[pos], gb[pos]);
            changed = true;
        }
    };
    cross_section(ca.genes_del, cb.genes_del);
    cross_section(ca.genes_add, cb.genes_add);
    if (changed) {
        ca.fitness.reset();
        cb.fitness.reset();
    }
    return {ca, cb};
}

Chromosome mutate(const Chromosome& chrom, double pm, const GenePools& pools, Rng& rng) {
    Chromosome out = chrom;
    bool changed = false;
    auto mutate_section = [&](std::vector<NodePair>& genes,
                              const std::vector<NodePair>& pool) {
        PairSet present(genes.begin(), genes.end());
        for (std::size_t pos = 0; pos < genes.size(); ++pos) {
            if (!rng.chance(pm)) continue;
            present.erase(genes[pos]);
            bool placed = false;
            for (int attempt = 0; attempt < 1000; ++attempt) {
                NodePair cand = pool[rng.below(pool.size())];
                if (present.count(cand)) continue;
                changed |= cand != genes[pos];
                genes[pos] = cand;
                present.insert(cand);
                placed = true;
                break;
            }
            if (!placed)
                throw std::runtime_error("mutation exhausted its redraw budget");
        }
    };
    mutate_section(out.genes_del, pools.train_edges);
    mutate_section(out.genes_add, pools.nonexistent);
    if (changed) out.fitness.reset();
    return out;
}

std::vector<Chromosome> eda_generate_population(std::span<const Chromosome> selected,
                                                std::size_t n_eda, std::size_t m,
                                                const GenePools& pools, Rng& rng,
                                                std::size_t* padded_genes) {
    if (selected.empty()) throw std::invalid_argument("empty estimation sample");
    if (padded_genes) *padded_genes = 0;

    struct Distribution {
        std::vector<NodePair> support;
        std::vector<std::uint64_t> cumulative;  // integer gene counts
        std::uint64_t total = 0;
    };
    auto estimate = [&](auto section, const std::vector<NodePair>& pool) {
        std::unordered_map<NodePair, std::uint64_t, PairHash> counts;
        for (const Chromosome& c : selected)
            for (NodePair g : section(c)) ++counts[g];
        Distribution dist;
        dist.support.reserve(counts.size());
        for (auto& [gene, cnt] : counts) dist.support.push_back(gene);
        std::sort(dist.support.begin(), dist.support.end());
        // The sampler needs at least m distinct genes; top up with uniform
        // candidates from the pool when the estimation sample is too narrow.
        if (dist.support.size() < m) {
            PairSet have(dist.support.begin(), dist.support.end());
            std::vector<NodePair> rest;
            for (NodePair p : pool)
                if (!have.count(p)) rest.push_back(p);
            const std::size_t need = m - dist.support.size();
            for (NodePair p : sample_distinct(rest, need, rng)) {
                dist.support.push_back(p);
                counts[p] = 1;
                if (padded_genes) ++(*padded_genes);
            }
        }
        dist.cumulative.reserve(dist.support.size());
        for (NodePair g : dist.support) {
            dist.total += counts[g];
            dist.cumulative.push_back(dist.total);
        }
        return dist;
    };

    const Distribution del_dist =
        estimate([](const Chromosome& c) -> const std::vector<NodePair>& {
            return c.genes_del;
        }, pools.train_edges);
    const Distribution add_dist =
        estimate([](const Chromosome& c) -> const std::vector<NodePair>& {
            return c.genes_add;
        }, pools.nonexistent);

    auto draw_section = [&](const Distribution& dist) {
        std::vector<NodePair> genes;
        genes.reserve(m);
        PairSet present;
        for (std::size_t i = 0; i < m; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 1000; ++attempt) {
                const std::uint64_t r =
                    std::uint64_t(rng.real() * (double)dist.total) % dist.total;
                const auto it =
                    std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), r);
                const NodePair cand =
                    dist.support[std::min<std::size_t>(it - dist.cumulative.begin(),
                                                       dist.support.size() - 1)];
                if (present.count(cand)) continue;
                genes.push_back(cand);
                present.insert(cand);
                placed = true;
                break;
            }
            if (!placed)
                throw std::runtime_error("EDA sampling exhausted its redraw budget");
        }
        return genes;
    };

    std::vector<Chromosome> out;
    out.reserve(n_eda);
    for (std::size_t i = 0; i < n_eda; ++i) {
        Chromosome c;
        c.genes_del = draw_section(del_dist);
        c.genes_add = draw_section(add_dist);
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

// Shared driver for the two evolutionary loops; `make_offspring` turns the
// evaluated population into the non-elite part of the next generation.
template <class MakeOffspring>
EvoRunResult evolve(const FitnessContext& ctx, const EvoParams& params,
                    int population_size, MakeOffspring&& make_offspring) {
    params.validate();
    const GenePools& pools = ctx.pools();
    if (params.m > pools.train_edges.size() || params.m > pools.nonexistent.size())
        throw std::invalid_argument("m exceeds a candidate pool");

    Rng rng(params.seed);
    std::vector<Chromosome> pop;
    pop.reserve(population_size);
    for (int i = 0; i < population_size; ++i) {
        Chromosome c;
        c.genes_del = sample_distinct(pools.train_edges, params.m, rng);
        c.genes_add = sample_distinct(pools.nonexistent, params.m, rng);
        pop.push_back(std::move(c));
    }

    EvoRunResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();
    int stagnant = 0;

    while (true) {
        for (Chromosome& c : pop)
            if (!c.fitness) c.fitness = ctx.fitness(c);

        const auto best_it =
            std::max_element(pop.begin(), pop.end(), [](const auto& a, const auto& b) {
                return *a.fitness < *b.fitness;
            });
        result.history.push_back(*best_it->fitness);
        if (*best_it->fitness > result.best_fitness) {
            result.best_fitness = *best_it->fitness;
            result.best = *best_it;
            stagnant = 0;
        } else {
            ++stagnant;
        }

        if (result.history.size() >= std::size_t(params.n_iteration)) break;
        if (stagnant >= params.convergence_patience) break;

        // Elites: best n_elite, ties keeping their current order.
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return *pop[a].fitness > *pop[b].fitness;
        });
        std::vector<Chromosome> next;
        next.reserve(population_size);
        for (int e = 0; e < params.n_elite && e < int(order.size()); ++e)
            next.push_back(pop[order[e]]);

        make_offspring(pop, next, rng);
        pop = std::move(next);
    }
    result.generations = int(result.history.size());
    return result;
}

std::vector<double> cached_fitness(const std::vector<Chromosome>& pop) {
    std::vector<double> f;
    f.reserve(pop.size());
    for (const Chromosome& c : pop) f.push_back(*c.fitness);
    return f;
}

}  // namespace

EvoRunResult ga_run(const FitnessContext& ctx, const EvoParams& params) {
    return evolve(ctx, params, params.ga_population(),
                  [&](const std::vector<Chromosome>& pop, std::vector<Chromosome>& next,
                      Rng& rng) {
                      const std::vector<double> fit = cached_fitness(pop);
                      const auto cro =
                          roulette_select(fit, std::size_t(params.n_crossover), rng);
                      for (std::size_t i = 0; i + 1 < cro.size(); i += 2) {
                          auto [c1, c2] =
                              crossover(pop[cro[i]], pop[cro[i + 1]], params.pc, rng);
                          next.push_back(std::move(c1));
                          next.push_back(std::move(c2));
                      }
                      if (cro.size() % 2 == 1) next.push_back(pop[cro.back()]);

                      const auto mut =
                          roulette_select(fit, std::size_t(params.n_mutation), rng);
                      for (std::size_t idx : mut)
                          next.push_back(mutate(pop[idx], params.pm, ctx.pools(), rng));
                  });
}

EvoRunResult eda_run(const FitnessContext& ctx, const EvoParams& params) {
    return evolve(ctx, params, params.eda_population(),
                  [&](const std::vector<Chromosome>& pop, std::vector<Chromosome>& next,
                      Rng& rng) {
                      const std::vector<double> fit = cached_fitness(pop);
                      const auto est =
                          roulette_select(fit, std::size_t(params.n_estimation), rng);
                      std::vector<Chromosome> sample;
                      sample.reserve(est.size());
                      for (std::size_t idx : est) sample.push_back(pop[idx]);
                      for (Chromosome& c : eda_generate_population(
                               sample, std::size_t(params.n_eda), params.m, ctx.pools(),
                               rng))
                          next.push_back(std::move(c));

                      const auto mut =
                          roulette_select(fit, std::size_t(params.n_mutation), rng);
                      for (std::size_t idx : mut)
                          next.push_back(mutate(pop[idx], params.pm, ctx.pools(), rng));
                  });
}

}  // namespace olp
