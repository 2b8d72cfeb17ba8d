"""Link perturbations that hide sensitive links from link-prediction attacks.

The heavy lifting lives in the compiled `_olp` extension; this package simply
re-exports it.
"""

from ._olp import (
    BaselineParams,
    Chromosome,
    EdgePartition,
    EvalResult,
    EvoParams,
    EvoRunResult,
    FitnessContext,
    Graph,
    Perturbation,
    ScoreTable,
    SimilarityIndex,
    TopoStats,
    affected_pairs,
    apply_perturbation,
    auc_score,
    eda_run,
    evaluate_attack,
    evaluate_defense,
    ga_run,
    hp,
    incremental_rescore,
    kfold_split,
    load_graph,
    precision_at_k,
    rlr,
    rls,
    score_all,
    score_pair,
    topo_stats,
)

__all__ = [
    "BaselineParams",
    "Chromosome",
    "EdgePartition",
    "EvalResult",
    "EvoParams",
    "EvoRunResult",
    "FitnessContext",
    "Graph",
    "Perturbation",
    "ScoreTable",
    "SimilarityIndex",
    "TopoStats",
    "affected_pairs",
    "apply_perturbation",
    "auc_score",
    "eda_run",
    "evaluate_attack",
    "evaluate_defense",
    "ga_run",
    "hp",
    "incremental_rescore",
    "kfold_split",
    "load_graph",
    "precision_at_k",
    "rlr",
    "rls",
    "score_all",
    "score_pair",
    "topo_stats",
]

__version__ = "0.1.0"
