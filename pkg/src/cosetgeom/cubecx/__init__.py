"""Median graphs, poc-sets and windowed Z-periodic cube complexes."""

from .graphs import (
    CROSS, Hyperplane, MedianCheck, MedianGraph, NotMedianError, SeparationReport,
    builtin_graph, crosses, cube_graph, cycle_graph, facing_triples, graph_from_json,
    graph_to_json, hyperplane_at, hyperplanes, interval, is_median, path_graph,
    relation, separates, separation_report, spider, tripod,
)
from .pocset import (
    PocSet, PocSetError, chain_walls, consistent_orientations, crossing_walls,
    dual_cube_complex, pocset_from_json, pocset_to_json,
)
from .window import (
    INCONCLUSIVE, SKEWERS, STABILISES, SkewerResult, TransferResult, WindowError,
    WindowedShiftComplex, builtin_window, crossing_set, hyperplane_symdiff, image,
    ladder_window, line_window, separation_index, skewer_check, staircase_window,
    transfer,
)
