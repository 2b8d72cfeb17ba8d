#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "olp/baselines.hpp"
#include "olp/evaluation.hpp"
#include "olp/evolutionary.hpp"
#include "olp/experiment.hpp"
#include "olp/graph.hpp"
#include "olp/similarity.hpp"

namespace py = pybind11;
using namespace olp;

namespace pybind11 {
namespace detail {

// NodePair <-> (u, v) tuples.
template <>
struct type_caster<NodePair> {
    PYBIND11_TYPE_CASTER(NodePair, const_name("tuple[int, int]"));

    bool load(handle src, bool) {
        if (!py::isinstance<py::tuple>(src) && !py::isinstance<py::list>(src))
            return false;
        const auto seq = py::cast<py::sequence>(src);
        if (seq.size() != 2) return false;
        try {
            value = NodePair(seq[0].cast<NodeId>(), seq[1].cast<NodeId>());
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    static handle cast(NodePair p, return_value_policy, handle) {
        return py::make_tuple(p.u, p.v).release();
    }
};

}  // namespace detail
}  // namespace pybind11

PYBIND11_MODULE(_olp, m) {
    m.doc() = "Link perturbations that hide sensitive links from "
              "similarity-based link prediction";

    py::class_<Graph>(m, "Graph")
        .def(py::init([](NodeId n, const std::vector<NodePair>& edges) {
                 return Graph(n, edges);
             }),
             py::arg("n_nodes"), py::arg("edges"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree, py::arg("v"))
        .def("neighbors",
             [](const Graph& g, NodeId v) {
                 auto nbrs = g.neighbors(v);
                 return std::vector<NodeId>(nbrs.begin(), nbrs.end());
             },
             py::arg("v"))
        .def("has_edge",
             py::overload_cast<NodeId, NodeId>(&Graph::has_edge, py::const_),
             py::arg("u"), py::arg("v"))
        .def("edges", &Graph::edges)
        .def("label", &Graph::label, py::arg("v"))
        .def("__repr__", [](const Graph& g) {
            std::ostringstream ss;
            ss << "Graph(|V|=" << g.node_count() << ", |E|=" << g.edge_count() << ")";
            return ss.str();
        });

    m.def("load_graph", [](const std::string& path) {
        return load_edge_list_file(path).graph;
    }, py::arg("path"), "Load a whitespace edge list ('#'/'%' comments).");

    py::class_<TopoStats>(m, "TopoStats")
        .def_readonly("n_nodes", &TopoStats::n_nodes)
        .def_readonly("n_edges", &TopoStats::n_edges)
        .def_readonly("avg_degree", &TopoStats::avg_degree)
        .def_readonly("clustering", &TopoStats::clustering)
        .def_readonly("avg_distance", &TopoStats::avg_distance)
        .def("__repr__", [](const TopoStats& s) {
            std::ostringstream ss;
            ss << "TopoStats(n=" << s.n_nodes << ", m=" << s.n_edges
               << ", k=" << s.avg_degree << ", C=" << s.clustering
               << ", d=" << s.avg_distance << ")";
            return ss.str();
        });
    m.def("topo_stats", &topo_stats, py::arg("graph"));

    py::class_<EdgePartition>(m, "EdgePartition")
        .def(py::init<const Graph&, std::vector<NodePair>, std::vector<NodePair>>(),
             py::arg("graph"), py::arg("train"), py::arg("validation"))
        .def_property_readonly("train", &EdgePartition::train)
        .def_property_readonly("validation", &EdgePartition::validation)
        .def("nonexistent", &EdgePartition::nonexistent)
        .def("unknown", &EdgePartition::unknown)
        .def("training_graph", &EdgePartition::training_graph,
             py::return_value_policy::reference_internal);
    m.def("kfold_split", &kfold_split, py::arg("graph"), py::arg("k"), py::arg("seed"));

    py::class_<Perturbation>(m, "Perturbation")
        .def(py::init([](std::vector<NodePair> deleted, std::vector<NodePair> added) {
                 return Perturbation{std::move(deleted), std::move(added)};
             }),
             py::arg("deleted") = std::vector<NodePair>{},
             py::arg("added") = std::vector<NodePair>{})
        .def_readwrite("deleted", &Perturbation::deleted)
        .def_readwrite("added", &Perturbation::added)
        .def("__len__", &Perturbation::size);
    m.def("apply_perturbation",
          [](const EdgePartition& part, const Perturbation& pert) {
              auto sets = apply_perturbation(part, pert);
              py::dict out;
              out["train"] = sets.train;
              out["unknown"] = sets.unknown;
              out["nonexistent"] = sets.nonexistent;
              out["train_graph"] = sets.train_graph;
              return out;
          },
          py::arg("partition"), py::arg("perturbation"));

    py::class_<SimilarityIndex>(m, "SimilarityIndex")
        .def(py::init([](const std::string& name) {
                 return SimilarityIndex::parse(name);
             }),
             py::arg("name"))
        .def_property_readonly("name", &SimilarityIndex::name)
        .def("__repr__", [](const SimilarityIndex& i) {
            return "SimilarityIndex(" + i.name() + ")";
        });

    py::class_<ScoreTable>(m, "ScoreTable")
        .def("at", &ScoreTable::at, py::arg("pair"))
        .def("contains", &ScoreTable::contains, py::arg("pair"))
        .def("pairs", &ScoreTable::pairs)
        .def("__len__", &ScoreTable::size)
        .def("items", [](const ScoreTable& t) {
            std::vector<std::pair<NodePair, double>> out;
            out.reserve(t.size());
            t.for_each([&](NodePair p, double s) { out.emplace_back(p, s); });
            return out;
        });

    m.def("score_pair",
          [](const Graph& g, const std::string& index, NodePair p) {
              return score_pair(g, SimilarityIndex::parse(index), p);
          },
          py::arg("graph"), py::arg("index"), py::arg("pair"));
    m.def("score_all",
          [](const Graph& g, const std::string& index,
             const std::vector<NodePair>& pairs) {
              return score_all(g, SimilarityIndex::parse(index), pairs);
          },
          py::arg("graph"), py::arg("index"), py::arg("pairs"));
    m.def("affected_pairs", &affected_pairs, py::arg("graph"), py::arg("toggled"));
    m.def("incremental_rescore", &incremental_rescore, py::arg("base"),
          py::arg("graph_before"), py::arg("perturbation"));

    m.def("precision_at_k",
          [](const ScoreTable& t, const std::vector<NodePair>& validation,
             std::size_t k) { return precision_at_k(t, validation, k); },
          py::arg("table"), py::arg("validation"), py::arg("k"));
    m.def("auc_score",
          [](const ScoreTable& t, const std::vector<NodePair>& validation,
             const std::vector<NodePair>& nonexistent) {
              return auc_score(t, validation, nonexistent);
          },
          py::arg("table"), py::arg("validation"), py::arg("nonexistent"));

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("precision", &EvalResult::precision)
        .def_readonly("auc", &EvalResult::auc)
        .def_readonly("method", &EvalResult::method)
        .def_readonly("proportion", &EvalResult::proportion)
        .def_readonly("fold", &EvalResult::fold)
        .def("__repr__", [](const EvalResult& r) {
            std::ostringstream ss;
            ss << "EvalResult(precision=" << r.precision << ", auc=" << r.auc << ")";
            return ss.str();
        });
    m.def("evaluate_attack",
          [](const EdgePartition& part, const Perturbation& pert,
             const std::string& index) {
              return evaluate_attack(part, pert, SimilarityIndex::parse(index));
          },
          py::arg("partition"), py::arg("perturbation"), py::arg("index") = "RA");

    py::class_<BaselineParams>(m, "BaselineParams")
        .def(py::init([](std::size_t m, std::uint64_t seed, int repeats) {
                 return BaselineParams{m, seed, repeats};
             }),
             py::arg("m"), py::arg("seed") = 0, py::arg("repeats") = 1)
        .def_readwrite("m", &BaselineParams::m)
        .def_readwrite("seed", &BaselineParams::seed)
        .def_readwrite("repeats", &BaselineParams::repeats);
    m.def("rlr", &rlr, py::arg("partition"), py::arg("params"));
    m.def("rls", &rls, py::arg("partition"), py::arg("params"));
    m.def("hp", &hp, py::arg("partition"), py::arg("m"));

    py::class_<EvoParams>(m, "EvoParams")
        .def(py::init<>())
        .def_readwrite("alpha", &EvoParams::alpha)
        .def_readwrite("m", &EvoParams::m)
        .def_readwrite("n_iteration", &EvoParams::n_iteration)
        .def_readwrite("n_elite", &EvoParams::n_elite)
        .def_readwrite("n_crossover", &EvoParams::n_crossover)
        .def_readwrite("n_mutation", &EvoParams::n_mutation)
        .def_readwrite("pc", &EvoParams::pc)
        .def_readwrite("pm", &EvoParams::pm)
        .def_readwrite("n_estimation", &EvoParams::n_estimation)
        .def_readwrite("n_eda", &EvoParams::n_eda)
        .def_readwrite("seed", &EvoParams::seed)
        .def_readwrite("convergence_patience", &EvoParams::convergence_patience);

    py::class_<Chromosome>(m, "Chromosome")
        .def_readonly("genes_del", &Chromosome::genes_del)
        .def_readonly("genes_add", &Chromosome::genes_add)
        .def("perturbation", &Chromosome::perturbation);

    py::class_<FitnessContext>(m, "FitnessContext")
        .def(py::init<const EdgePartition&, double>(), py::arg("partition"),
             py::arg("alpha"))
        .def("fitness", &FitnessContext::fitness, py::arg("chromosome"))
        .def_property_readonly("rescored_pairs", &FitnessContext::rescored_pairs)
        .def_property_readonly("evaluations", &FitnessContext::evaluations);

    py::class_<EvoRunResult>(m, "EvoRunResult")
        .def_readonly("best", &EvoRunResult::best)
        .def_readonly("best_fitness", &EvoRunResult::best_fitness)
        .def_readonly("history", &EvoRunResult::history)
        .def_readonly("generations", &EvoRunResult::generations);
    m.def("ga_run", &ga_run, py::arg("context"), py::arg("params"),
          py::call_guard<py::gil_scoped_release>());
    m.def("eda_run", &eda_run, py::arg("context"), py::arg("params"),
          py::call_guard<py::gil_scoped_release>());

    m.def("evaluate_defense",
          [](const Graph& g, const std::vector<EdgePartition>& folds,
             const std::string& method, double proportion, double alpha,
             const EvoParams& evo, const std::string& attack, std::uint64_t seed,
             int repeats) {
              return evaluate_defense(g, folds, method, proportion, alpha, evo,
                                      SimilarityIndex::parse(attack), seed, repeats);
          },
          py::arg("graph"), py::arg("folds"), py::arg("method"),
          py::arg("proportion"), py::arg("alpha"), py::arg("evo") = EvoParams{},
          py::arg("attack") = "RA", py::arg("seed") = 1, py::arg("repeats") = 1,
          py::call_guard<py::gil_scoped_release>());
}
