#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "olp/similarity.hpp"
#include "oracles.hpp"

using namespace olp;

namespace {
const std::string kDatasets = OLP_DATASET_DIR;
const SimilarityIndex kRa{IndexKind::RA};

const std::vector<SimilarityIndex> kAllIndices = {
    {IndexKind::RA},      {IndexKind::CN}, {IndexKind::Jaccard},
    {IndexKind::PA},      {IndexKind::AA}, {IndexKind::LP, 0.5},
};

std::vector<NodePair> all_pairs(NodeId n) {
    std::vector<NodePair> out;
    for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) out.emplace_back(u, v);
    return out;
}
}  // namespace

TEST_CASE("index names parse and print") {
    CHECK(SimilarityIndex::parse("ra").kind == IndexKind::RA);
    CHECK(SimilarityIndex::parse("Jaccard").kind == IndexKind::Jaccard);
    CHECK(SimilarityIndex::parse("LP").lp_damping == doctest::Approx(0.5));
    CHECK(SimilarityIndex::parse("LP:0.25").lp_damping == doctest::Approx(0.25));
    CHECK_THROWS(SimilarityIndex::parse("katz"));
    CHECK(SimilarityIndex{IndexKind::AA}.name() == "AA");
}

TEST_CASE("score_pair on hand-checked shapes") {
    SUBCASE("path u-z-v gives RA 1/2") {
        std::istringstream in("u z\nz v\n");
        const Graph g = load_edge_list(in).graph;
        CHECK(score_pair(g, kRa, NodePair(0, 2)) == doctest::Approx(0.5));
    }
    SUBCASE("star with three leaves") {
        std::istringstream in("z a\nz b\nz c\n");
        const Graph g = load_edge_list(in).graph;
        const NodePair leaves(1, 2);
        CHECK(score_pair(g, kRa, leaves) == doctest::Approx(1.0 / 3.0));
        CHECK(score_pair(g, {IndexKind::CN}, leaves) == doctest::Approx(1.0));
        CHECK(score_pair(g, {IndexKind::PA}, leaves) == doctest::Approx(1.0));
    }
    SUBCASE("self-pair is rejected") {
        CHECK_THROWS(NodePair(1, 1));
    }
}

TEST_CASE("all six indices match the dense brute-force oracle") {
    const auto edges = oracle::random_edges(12, 0.35, 99);
    const Graph g(12, edges);
    const auto dense = oracle::DenseGraph::from(g);
    for (const SimilarityIndex& index : kAllIndices)
        for (NodePair p : all_pairs(12))
            CHECK(score_pair(g, index, p) ==
                  doctest::Approx(oracle::score(dense, index, p.u, p.v)).epsilon(1e-12));
}

TEST_CASE("scores are symmetric, non-negative, and RA/AA are bounded by CN") {
    const auto edges = oracle::random_edges(15, 0.3, 123);
    const Graph g(15, edges);
    for (NodePair p : all_pairs(15)) {
        const double cn = score_pair(g, {IndexKind::CN}, p);
        for (const SimilarityIndex& index : kAllIndices)
            CHECK(score_pair(g, index, p) >= 0.0);
        CHECK(score_pair(g, kRa, p) <= cn + 1e-12);
        CHECK(score_pair(g, {IndexKind::AA}, p) <= cn * (1.0 / std::log(2.0)) + 1e-9);
    }
}

TEST_CASE("adding a degree-2 common neighbor raises RA by exactly 1/2") {
    std::istringstream in("u a\nv b\na b\n");
    const Graph g = load_edge_list(in).graph;
    const NodePair uv(0, 2);
    const double before = score_pair(g, kRa, uv);
    // New node w adjacent to exactly u and v.
    std::vector<NodePair> edges = g.edges();
    edges.emplace_back(0, 4);
    edges.emplace_back(2, 4);
    const Graph g2(5, edges);
    CHECK(score_pair(g2, kRa, uv) == doctest::Approx(before + 0.5));
}

TEST_CASE("score_all covers exactly the requested pairs") {
    std::istringstream in("a b\nb c\nc d\nd e\n");  // 5-node path
    const Graph g = load_edge_list(in).graph;

    const ScoreTable empty = score_all(g, kRa, {});
    CHECK(empty.size() == 0);

    const auto omega = all_pairs(5);
    const ScoreTable table = score_all(g, kRa, omega);
    CHECK(table.size() == 10);
    const auto dense = oracle::DenseGraph::from(g);
    table.for_each([&](NodePair p, double s) {
        CHECK(s == doctest::Approx(oracle::score(dense, kRa, p.u, p.v)));
    });
    // Hand enumeration: only distance-2 pairs along the path score 1/2.
    CHECK(table.at(NodePair(0, 2)) == doctest::Approx(0.5));
    CHECK(table.at(NodePair(1, 3)) == doctest::Approx(0.5));
    CHECK(table.at(NodePair(2, 4)) == doctest::Approx(0.5));
    CHECK(table.at(NodePair(0, 3)) == doctest::Approx(0.0));
    CHECK(table.at(NodePair(0, 4)) == doctest::Approx(0.0));
}

TEST_CASE("score table CSV export") {
    std::istringstream in("a b\nb c\n");
    const Graph g = load_edge_list(in).graph;
    const ScoreTable table = score_all(g, kRa, all_pairs(3));
    std::ostringstream out;
    table.write_csv(out, g);
    CHECK(out.str() == "u,v,score\na,b,0\na,c,0.5\nb,c,0\n");
}

TEST_CASE("affected_pairs bound and completeness") {
    SUBCASE("isolated edge has bound 3") {
        std::istringstream in("i j\nx y\n");
        const Graph g = load_edge_list(in).graph;
        const auto set = affected_pairs(g, NodePair(0, 1));
        // k_i = k_j = 1 so the bound is (1+1+1+1)/2 + 1 = 3.
        CHECK(set.size() <= 3);
        CHECK(std::find(set.begin(), set.end(), NodePair(0, 1)) != set.end());
    }
    SUBCASE("path a-i-j-b deletion: every changed pair is covered") {
        std::istringstream in("a i\ni j\nj b\n");
        const Graph g = load_edge_list(in).graph;
        const NodePair toggled(1, 2);
        const auto covered = affected_pairs(g, toggled);
        const Graph g2 = g.with_toggled(std::vector<NodePair>{toggled}, {});
        const auto dense1 = oracle::DenseGraph::from(g);
        const auto dense2 = oracle::DenseGraph::from(g2);
        for (NodePair p : all_pairs(4)) {
            const double before = oracle::score(dense1, kRa, p.u, p.v);
            const double after = oracle::score(dense2, kRa, p.u, p.v);
            if (before != after)
                CHECK(std::find(covered.begin(), covered.end(), p) != covered.end());
        }
    }
    SUBCASE("random graph, 200 toggles: changed pairs always inside the superset") {
        const Graph g(15, oracle::random_edges(15, 0.3, 321));
        const auto dense1 = oracle::DenseGraph::from(g);
        std::mt19937 gen(5);
        const auto omega = all_pairs(15);
        for (int trial = 0; trial < 200; ++trial) {
            const NodePair toggled = omega[gen() % omega.size()];
            const bool is_edge = g.has_edge(toggled);
            const Graph g2 =
                is_edge ? g.with_toggled(std::vector<NodePair>{toggled}, {})
                        : g.with_toggled({}, std::vector<NodePair>{toggled});
            const auto dense2 = oracle::DenseGraph::from(g2);
            const auto covered = affected_pairs(g, toggled);
            const std::set<NodePair> covered_set(covered.begin(), covered.end());
            for (NodePair p : omega) {
                const double before = oracle::score(dense1, kRa, p.u, p.v);
                const double after = oracle::score(dense2, kRa, p.u, p.v);
                if (before != after) CHECK(covered_set.count(p) == 1);
            }
            // Bound with the larger (union) degrees.
            const int ki = g2.degree(toggled.u) > g.degree(toggled.u)
                               ? g2.degree(toggled.u)
                               : g.degree(toggled.u);
            const int kj = g2.degree(toggled.v) > g.degree(toggled.v)
                               ? g2.degree(toggled.v)
                               : g.degree(toggled.v);
            CHECK(covered.size() <= std::size_t((ki * ki + kj * kj + ki + kj) / 2 + 1));
        }
    }
}

TEST_CASE("incremental_rescore equals full recomputation") {
    const Graph g(14, oracle::random_edges(14, 0.35, 77));
    std::vector<NodePair> train = g.edges();
    // Hold out two edges as the hidden set.
    std::vector<NodePair> validation = {train[0], train[5]};
    train.erase(train.begin() + 5);
    train.erase(train.begin());
    const EdgePartition part(g, train, validation);
    const Graph& tg = part.training_graph();
    const auto candidates = part.nonexistent();
    const ScoreTable base = score_all(tg, kRa, candidates);

    SUBCASE("empty perturbation returns the table unchanged") {
        const ScoreTable same = incremental_rescore(base, tg, Perturbation{});
        CHECK(same.size() == base.size());
        base.for_each([&](NodePair p, double s) { CHECK(same.at(p) == s); });
    }
    SUBCASE("non-RA tables are rejected") {
        const ScoreTable cn = score_all(tg, {IndexKind::CN}, candidates);
        Perturbation pert;
        pert.deleted = {part.train().front()};
        pert.added = {candidates.front()};
        CHECK_THROWS(incremental_rescore(cn, tg, pert));
    }
    SUBCASE("random perturbations match score_all on the perturbed graph") {
        std::mt19937 gen(9);
        for (int trial = 0; trial < 50; ++trial) {
            Perturbation pert;
            std::set<std::size_t> di, ai;
            while (di.size() < 3) di.insert(gen() % part.train().size());
            while (ai.size() < 3) ai.insert(gen() % candidates.size());
            for (std::size_t i : di) pert.deleted.push_back(part.train()[i]);
            for (std::size_t i : ai) pert.added.push_back(candidates[i]);

            const ScoreTable fast = incremental_rescore(base, tg, pert);
            const auto sets = apply_perturbation(part, pert);
            const ScoreTable slow = score_all(sets.train_graph, kRa, sets.nonexistent);
            CHECK(fast.size() == slow.size());
            double max_dev = 0.0;
            slow.for_each([&](NodePair p, double s) {
                max_dev = std::max(max_dev, std::abs(fast.at(p) - s));
            });
            CHECK(max_dev <= 1e-12);
        }
    }
}

TEST_CASE("exhaustive theorem check on small graphs") {
    // All toggles over a corpus of random graphs with up to 12 nodes.
    std::mt19937 gen(31);
    for (int graph_no = 0; graph_no < 25; ++graph_no) {
        const int n = 4 + int(gen() % 9);
        const double p = 0.15 + 0.6 * double(gen() % 100) / 100.0;
        const Graph g(n, oracle::random_edges(n, p, gen()));
        const auto dense1 = oracle::DenseGraph::from(g);
        for (NodeId u = 0; u + 1 < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) {
                const NodePair toggled(u, v);
                const bool is_edge = g.has_edge(toggled);
                const Graph g2 =
                    is_edge ? g.with_toggled(std::vector<NodePair>{toggled}, {})
                            : g.with_toggled({}, std::vector<NodePair>{toggled});
                const auto dense2 = oracle::DenseGraph::from(g2);
                const auto covered = affected_pairs(g, toggled);
                const std::set<NodePair> cset(covered.begin(), covered.end());
                for (NodeId b = 1; b < n; ++b)
                    for (NodeId a = 0; a < b; ++a) {
                        NodePair q(a, b);
                        if (oracle::score(dense1, kRa, a, b) !=
                            oracle::score(dense2, kRa, a, b))
                            CHECK(cset.count(q) == 1);
                    }
                const int ki = std::max(g.degree(u), g2.degree(u));
                const int kj = std::max(g.degree(v), g2.degree(v));
                CHECK(covered.size() <=
                      std::size_t((ki * ki + kj * kj + ki + kj) / 2 + 1));
            }
    }
}
