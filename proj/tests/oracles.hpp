#pragma once

// Reference implementations used only by tests. Everything here recomputes
// from scratch over a dense adjacency matrix, staying independent of the
// library's sorted-adjacency and incremental code paths.

#include <cmath>
#include <random>
#include <vector>

#include "olp/evaluation.hpp"
#include "olp/graph.hpp"
#include "olp/similarity.hpp"

namespace oracle {

struct DenseGraph {
    int n = 0;
    std::vector<std::vector<char>> adj;

    static DenseGraph from(const olp::Graph& g) {
        DenseGraph d;
        d.n = g.node_count();
        d.adj.assign(d.n, std::vector<char>(d.n, 0));
        for (olp::NodePair e : g.edges()) {
            d.adj[e.u][e.v] = 1;
            d.adj[e.v][e.u] = 1;
        }
        return d;
    }

    static DenseGraph from_edges(int n, const std::vector<olp::NodePair>& edges) {
        DenseGraph d;
        d.n = n;
        d.adj.assign(n, std::vector<char>(n, 0));
        for (olp::NodePair e : edges) {
            d.adj[e.u][e.v] = 1;
            d.adj[e.v][e.u] = 1;
        }
        return d;
    }

    int degree(int v) const {
        int k = 0;
        for (int z = 0; z < n; ++z) k += adj[v][z];
        return k;
    }
};

inline double score(const DenseGraph& g, const olp::SimilarityIndex& index, int u, int v) {
    using olp::IndexKind;
    switch (index.kind) {
        case IndexKind::RA: {
            double s = 0.0;
            for (int z = 0; z < g.n; ++z)
                if (g.adj[u][z] && g.adj[v][z]) s += 1.0 / double(g.degree(z));
            return s;
        }
        case IndexKind::CN: {
            int c = 0;
            for (int z = 0; z < g.n; ++z) c += g.adj[u][z] && g.adj[v][z];
            return double(c);
        }
        case IndexKind::Jaccard: {
            int inter = 0, uni = 0;
            for (int z = 0; z < g.n; ++z) {
                inter += g.adj[u][z] && g.adj[v][z];
                uni += g.adj[u][z] || g.adj[v][z];
            }
            return uni == 0 ? 0.0 : double(inter) / double(uni);
        }
        case IndexKind::PA:
            return double(g.degree(u)) * double(g.degree(v));
        case IndexKind::AA: {
            double s = 0.0;
            for (int z = 0; z < g.n; ++z)
                if (g.adj[u][z] && g.adj[v][z] && g.degree(z) > 1)
                    s += 1.0 / std::log(double(g.degree(z)));
            return s;
        }
        case IndexKind::LP: {
            int p2 = 0;
            for (int z = 0; z < g.n; ++z) p2 += g.adj[u][z] && g.adj[z][v];
            long p3 = 0;
            for (int a = 0; a < g.n; ++a) {
                if (!g.adj[u][a] || a == v) continue;
                for (int b = 0; b < g.n; ++b) {
                    if (b == u || b == a) continue;
                    if (g.adj[a][b] && g.adj[b][v]) ++p3;
                }
            }
            return double(p2) + index.lp_damping * double(p3);
        }
    }
    return 0.0;
}

// Fitness by full recomputation: rebuild the perturbed training graph and
// rescan every candidate and validation pair.
inline double fitness_full(const olp::EdgePartition& part, const olp::Perturbation& pert,
                           double alpha) {
    const olp::PerturbedSets sets = olp::apply_perturbation(part, pert);
    const DenseGraph g = DenseGraph::from(sets.train_graph);
    const olp::SimilarityIndex ra{olp::IndexKind::RA};

    long double ev_sum = 0.0L;
    double ev_max = -1.0;
    for (olp::NodePair p : part.validation()) {
        const double s = score(g, ra, p.u, p.v);
        ev_sum += s;
        if (s > ev_max) ev_max = s;
    }
    long double n_sum = 0.0L;
    long long above = 0;
    for (olp::NodePair p : sets.nonexistent) {
        const double s = score(g, ra, p.u, p.v);
        n_sum += s;
        if (s > ev_max) ++above;
    }
    const long double mean_n = n_sum / (long double)sets.nonexistent.size();
    const long double mean_ev = ev_sum / (long double)part.validation().size();
    return alpha * double(above) + double(mean_n - mean_ev);
}

// AUC by the literal double loop.
inline double auc_double_loop(const olp::ScoreTable& table,
                              const std::vector<olp::NodePair>& validation,
                              const std::vector<olp::NodePair>& nonexistent) {
    long long greater2 = 0;
    for (olp::NodePair a : validation)
        for (olp::NodePair b : nonexistent) {
            const double sa = table.at(a), sb = table.at(b);
            if (sa > sb) greater2 += 2;
            else if (sa == sb) greater2 += 1;
        }
    return double(greater2) /
           (2.0 * double(validation.size()) * double(nonexistent.size()));
}

// Deterministic Erdos-Renyi-ish test graph, independent of the library RNG.
inline std::vector<olp::NodePair> random_edges(int n, double p, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<olp::NodePair> edges;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            if (coin(gen) < p) edges.emplace_back(u, v);
    return edges;
}

}  // namespace oracle
