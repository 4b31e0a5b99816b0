"""Multi- and single-objective search over cell-based architecture benchmarks."""

from .benchmark import (
    BenchmarkRecord,
    BenchmarkTable,
    EvaluationCache,
    ObjectiveSpec,
    SyntheticEvaluator,
    TableError,
    exhaustive_pareto_front,
    generate_synthetic,
    load_table,
    objectives,
    save_table,
)
from .experiment import ExperimentConfig, SyntheticSpec, run_experiment
from .ga import run_ga
from .gomea import run_gomea, run_mo_gomea
from .linkage import ClusterAssignment, LinkageTree, cluster_population, learn_linkage_tree
from .local_search import LocalSearchConfig, run_local_search, run_random_search
from .nsga2 import crowding_distance, non_dominated_sort, run_nsga2
from .pareto import (
    Archive,
    ArchiveEntry,
    ObjectiveVector,
    dominates,
    epsilon_threshold,
    hypervolume,
    igd,
    pareto_maxima,
    scalarize,
)
from .runlog import RunLog, RunRecorder, TraceEntry
from .spaces import (
    Genotype,
    SearchSpace,
    SpaceError,
    canonical_key,
    canonicalize,
    count_distinct_architectures,
    encoding_count,
    enumerate_canonical_genotypes,
    load_space,
    random_genotype,
    seed_genotype,
    trivial_genotype,
)
from .stats import (
    StatsResult,
    complexity_trace,
    mann_whitney_u,
    metric_series,
    moving_average,
    pairwise_tests,
    success_rate_curve,
)

__version__ = "0.1.0"
