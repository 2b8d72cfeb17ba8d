#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "olp/baselines.hpp"
#include "olp/similarity.hpp"
#include "oracles.hpp"

using namespace olp;

namespace {
const std::string kDatasets = OLP_DATASET_DIR;
const SimilarityIndex kRa{IndexKind::RA};

EdgePartition make_partition(const Graph& g, std::vector<NodePair> validation) {
    std::set<NodePair> hidden(validation.begin(), validation.end());
    std::vector<NodePair> train;
    for (NodePair e : g.edges())
        if (!hidden.count(e)) train.push_back(e);
    return EdgePartition(g, std::move(train), std::move(validation));
}

std::multiset<int> degree_sequence(const EdgePartition& part, const Perturbation& pert) {
    const auto sets = apply_perturbation(part, pert);
    std::multiset<int> degrees;
    for (NodeId v = 0; v < sets.train_graph.node_count(); ++v)
        degrees.insert(sets.train_graph.degree(v));
    return degrees;
}

Graph graph_of(const EdgePartition& part, const std::set<NodePair>& current) {
    std::vector<NodePair> edges(current.begin(), current.end());
    return Graph(part.node_count(), edges);
}
}  // namespace

TEST_CASE("rlr draws valid uniform perturbations") {
    const Graph g(10, oracle::random_edges(10, 0.4, 15));
    const auto part = make_partition(g, {g.edges().back()});

    SUBCASE("sampling domains are respected") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Perturbation pert = rlr(part, BaselineParams{2, seed});
            validate_perturbation(part, pert);
            CHECK(pert.deleted.size() == 2);
            CHECK(pert.added.size() == 2);
        }
    }
    SUBCASE("each training link is deleted with frequency 1/|E^T|") {
        std::istringstream in("a b\nb c\nc d\nd e\ne f\nf a\ng a\n");
        const Graph ring = load_edge_list(in).graph;
        const auto p6 = make_partition(ring, {NodePair(0, 6)});
        REQUIRE(p6.train().size() == 6);
        std::map<NodePair, int> hits;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const Perturbation pert = rlr(p6, BaselineParams{1, std::uint64_t(i)});
            ++hits[pert.deleted[0]];
        }
        CHECK(hits.size() == 6);
        for (auto& [edge, count] : hits)
            CHECK(std::abs(double(count) / draws - 1.0 / 6.0) <= 0.01);
    }
    SUBCASE("infeasible sizes are rejected") {
        CHECK_THROWS(rlr(part, BaselineParams{0, 1}));
        CHECK_THROWS(rlr(part, BaselineParams{part.train().size() + 1, 1}));
    }
}

TEST_CASE("rls preserves the training degree sequence") {
    SUBCASE("4-cycle forces the chords") {
        std::istringstream in("a b\nb c\nc d\nd a\ne f\n");
        const Graph g = load_edge_list(in).graph;
        const auto part = make_partition(g, {NodePair(4, 5)});
        REQUIRE(part.train().size() == 4);
        const Perturbation pert = rls(part, BaselineParams{2, 7});
        validate_perturbation(part, pert);
        const std::set<NodePair> added(pert.added.begin(), pert.added.end());
        CHECK(added == std::set<NodePair>{NodePair(0, 2), NodePair(1, 3)});
        const auto sets = apply_perturbation(part, pert);
        CHECK(sets.train.size() == 4);
        for (NodeId v = 0; v < 4; ++v) CHECK(sets.train_graph.degree(v) == 2);
    }
    SUBCASE("degree sequence invariant on a larger graph") {
        const Graph g(20, oracle::random_edges(20, 0.3, 44));
        const auto part = make_partition(g, {g.edges().front()});
        const auto before = degree_sequence(part, Perturbation{});
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const Perturbation pert = rls(part, BaselineParams{4, seed});
            validate_perturbation(part, pert);
            CHECK(degree_sequence(part, pert) == before);
        }
    }
    SUBCASE("odd m is rejected") {
        const Graph g(20, oracle::random_edges(20, 0.3, 44));
        const auto part = make_partition(g, {g.edges().front()});
        CHECK_THROWS(rls(part, BaselineParams{3, 1}));
    }
    SUBCASE("dolphin swaps stay inside their domains") {
        const Graph g = load_edge_list_file(kDatasets + "/dolphin.edges").graph;
        const auto folds = kfold_split(g, 10, 5);
        const Perturbation pert = rls(folds[0], BaselineParams{2, 3});
        validate_perturbation(folds[0], pert);
        CHECK(pert.deleted.size() == 2);
        CHECK(pert.added.size() == 2);
    }
}

TEST_CASE("hp delete-link editor") {
    SUBCASE("training pairs are deleted outright") {
        std::istringstream in("a b\nb c\nc a\nc d\n");
        const Graph g = load_edge_list(in).graph;
        const auto part = make_partition(g, {NodePair(2, 3)});
        HpState state(part);
        const auto got = state.delete_link(NodePair(0, 1));
        REQUIRE(got.has_value());
        CHECK(*got == NodePair(0, 1));
        CHECK_FALSE(state.has_edge(NodePair(0, 1)));
        CHECK(state.deleted().size() == 1);
    }
    SUBCASE("hidden pair with no common neighbors yields nothing") {
        std::istringstream in("a b\nc d\nb c\n");
        const Graph g = load_edge_list(in).graph;
        const auto part = make_partition(g, {NodePair(0, 1)});
        HpState state(part);
        CHECK_FALSE(state.delete_link(NodePair(0, 1)).has_value());
    }
    SUBCASE("hidden pair cuts min-degree common neighbor from max-degree endpoint") {
        // i=0, j=1, k1=2 (degree 2), k2=3 (degree 5); d_i=3, d_j=4.
        std::vector<NodePair> train = {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3},
                                       {1, 5}, {1, 6}, {3, 4}, {3, 5}, {3, 6}};
        std::vector<NodePair> all = train;
        all.emplace_back(0, 1);
        const Graph g(7, all);
        const EdgePartition part(g, train, {NodePair(0, 1)});
        HpState state(part);
        REQUIRE(state.degree(2) == 2);
        REQUIRE(state.degree(3) == 5);
        REQUIRE(state.degree(0) == 3);
        REQUIRE(state.degree(1) == 4);
        const auto got = state.delete_link(NodePair(0, 1));
        REQUIRE(got.has_value());
        CHECK(*got == NodePair(1, 2));  // (k1, j)
    }
}

TEST_CASE("hp add-link editor") {
    SUBCASE("hidden pair needs two common neighbors") {
        std::istringstream in("i k\nk j\ni j\nx y\n");
        const Graph g = load_edge_list(in).graph;
        const auto part = make_partition(g, {NodePair(0, 2)});  // (i, j)
        HpState state(part);
        CHECK_FALSE(state.add_link(NodePair(0, 2)).has_value());
    }
    SUBCASE("hidden pair connects its two lowest-degree common neighbors") {
        // i=0, j=1; common neighbors 2 (deg 2), 3 (deg 2), 4 (deg 4).
        std::vector<NodePair> train = {{0, 2}, {1, 2}, {0, 3}, {1, 3}, {0, 4},
                                       {1, 4}, {4, 5}, {4, 6}};
        std::vector<NodePair> all = train;
        all.emplace_back(0, 1);
        const Graph g(7, all);
        const EdgePartition part(g, train, {NodePair(0, 1)});
        HpState state(part);
        const auto got = state.add_link(NodePair(0, 1));
        REQUIRE(got.has_value());
        CHECK(*got == NodePair(2, 3));
        CHECK(state.has_edge(NodePair(2, 3)));
    }
    SUBCASE("non-existent pair with identical neighborhoods yields nothing") {
        std::istringstream in("i a\nj a\ni b\nj b\nx y\n");
        const Graph g = load_edge_list(in).graph;
        const auto part = make_partition(g, {NodePair(4, 5)});
        HpState state(part);
        CHECK_FALSE(state.add_link(NodePair(0, 2)).has_value());  // (i, j)
    }
    SUBCASE("non-existent pair links the min-degree exclusive neighbor across") {
        // i=0, j=1; Gamma(i) = {2} with degree 1, Gamma(j) = {3} with degree 4.
        std::vector<NodePair> train = {{0, 2}, {1, 3}, {3, 4}, {3, 5}, {3, 6}};
        std::vector<NodePair> all = train;
        all.emplace_back(4, 5);
        const Graph g(7, all);
        const EdgePartition part(g, train, {NodePair(4, 5)});
        HpState state(part);
        const Graph& tg = part.training_graph();
        const double before = score_pair(tg, kRa, NodePair(0, 1));
        const auto got = state.add_link(NodePair(0, 1));
        REQUIRE(got.has_value());
        CHECK(*got == NodePair(1, 2));  // (a, j)
        const Graph after = tg.with_toggled({}, std::vector<NodePair>{*got});
        CHECK(score_pair(after, kRa, NodePair(0, 1)) > before);
    }
}

TEST_CASE("hp deletes the top-RA training pair first") {
    // K4 plus a detached hidden edge: the RA ranking starts with the K4
    // pairs, all training links, tie-broken to (0,1).
    std::vector<NodePair> train = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::vector<NodePair> all = train;
    all.emplace_back(4, 5);
    const Graph g(6, all);
    const EdgePartition part(g, train, {NodePair(4, 5)});
    const Perturbation pert = hp(part, 1);
    REQUIRE(pert.deleted.size() == 1);
    CHECK(pert.deleted.front() == NodePair(0, 1));
}

TEST_CASE("hp on dolphin: budgets, domains, determinism") {
    const Graph g = load_edge_list_file(kDatasets + "/dolphin.edges").graph;
    const auto folds = kfold_split(g, 10, 11);
    const EdgePartition& part = folds[0];

    const Perturbation pert = hp(part, 5);
    CHECK(pert.deleted.size() == 5);
    CHECK(pert.added.size() == 5);
    validate_perturbation(part, pert);

    const Perturbation again = hp(part, 5);
    CHECK(again.deleted == pert.deleted);
    CHECK(again.added == pert.added);
}

TEST_CASE("hp edits move the triggering pair's RA the right way") {
    const Graph g = load_edge_list_file(kDatasets + "/lesmis.edges").graph;
    const auto folds = kfold_split(g, 10, 3);
    const EdgePartition& part = folds[0];
    const Graph& tg = part.training_graph();

    std::vector<std::pair<double, NodePair>> ranked;
    for (NodeId u = 0; u + 1 < tg.node_count(); ++u)
        for (NodeId v = u + 1; v < tg.node_count(); ++v) {
            NodePair p(u, v);
            ranked.emplace_back(score_pair(tg, kRa, p), p);
        }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    HpState state(part);
    std::set<NodePair> current(part.train().begin(), part.train().end());
    std::size_t deletions = 0, insertions = 0;
    for (const auto& [score, pair] : ranked) {
        if (deletions >= 8 && insertions >= 8) break;
        const PairClass cls = part.classify(pair);
        if ((cls == PairClass::Train || cls == PairClass::Validation) && deletions < 8) {
            const double before = score_pair(graph_of(part, current), kRa, pair);
            if (auto cut = state.delete_link(pair)) {
                current.erase(*cut);
                ++deletions;
                if (cls == PairClass::Validation)
                    CHECK(score_pair(graph_of(part, current), kRa, pair) < before);
            }
            continue;
        }
        if ((cls == PairClass::Validation || cls == PairClass::Nonexistent) &&
            insertions < 8) {
            const double before = score_pair(graph_of(part, current), kRa, pair);
            if (auto put = state.add_link(pair)) {
                current.insert(*put);
                ++insertions;
                const double after = score_pair(graph_of(part, current), kRa, pair);
                if (cls == PairClass::Validation) CHECK(after < before);
                if (cls == PairClass::Nonexistent) CHECK(after > before);
            }
        }
    }
    CHECK(deletions == 8);
    CHECK(insertions == 8);
}

TEST_CASE("perturbation files round-trip") {
    const Graph g = load_edge_list_file(kDatasets + "/dolphin.edges").graph;
    const auto folds = kfold_split(g, 10, 1);
    const Perturbation pert = rlr(folds[0], BaselineParams{4, 9});

    std::ostringstream out;
    write_perturbation(out, g, pert);
    std::istringstream in(out.str());
    const Perturbation back = read_perturbation(in, g);
    CHECK(back.deleted == pert.deleted);
    CHECK(back.added == pert.added);

    std::istringstream bad("MOD a b\n");
    CHECK_THROWS(read_perturbation(bad, g));
}

TEST_CASE("pad_to_m tops a short perturbation up to full size") {
    const Graph g = load_edge_list_file(kDatasets + "/dolphin.edges").graph;
    const auto folds = kfold_split(g, 10, 1);
    Perturbation pert = rlr(folds[0], BaselineParams{2, 9});
    pert.added.pop_back();
    Rng rng(5);
    const std::size_t padded = pad_to_m(folds[0], pert, 3, rng);
    CHECK(padded == 3);
    validate_perturbation(folds[0], pert);
    CHECK(pert.deleted.size() == 3);
    CHECK(pert.added.size() == 3);
}
