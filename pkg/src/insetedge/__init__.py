"""Exact effect of every single inset edge on a tree's Wiener index and average distance."""

from .direct import (
    CoefficientMatrix,
    CyclePartition,
    WeightVectors,
    adprime,
    coefficient_matrix,
    cycle_partition,
    dprime_lemma1,
    dprime_lemma2,
    dprime_shortcut_oracle,
    weight_vectors,
)
from .query import DeltaIndex, QueryResult, build_index, closest, extremes, top_k
from .sweep import (
    InsetRecord,
    RecordColumns,
    Middle,
    SweepFrame,
    SweepStats,
    collect,
    collect_columns,
    enumerate_middles,
    extend_frame,
    init_edge_frames,
    init_vertex_frames,
    middle_of,
    sweep_all,
    sweep_parallel,
)
from .tree import (
    SplitTable,
    Tree,
    TreeError,
    average_distance,
    edge_splits,
    generate,
    parse_tree,
    tree_path,
    wiener_bfs,
    wiener_from_splits,
)

__version__ = "0.1.0"
