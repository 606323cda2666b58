"""Time-like graphs, processes indexed by them, and related numerics."""

from .graph import Edge, GraphError, GraphPoint, TimeLikeGraph, Vertex, validate_tlg
from .order import BOTTOM, TOP, MeetJoin, meet_join, order_leq
from .paths import PathCapExceeded, full_time_paths, interval, time_paths
from .cells import Cell, cell_collapse, find_cells
from .tower import Tower, replay
from .stingy import StarResult, is_tlg_star
from .embed import embed, is_tlg_star_star, moralize, mrf_adjacency

__all__ = [
    "BOTTOM", "TOP", "Cell", "Edge", "GraphError", "GraphPoint", "MeetJoin",
    "PathCapExceeded", "StarResult", "TimeLikeGraph", "Tower", "Vertex",
    "cell_collapse", "embed", "find_cells", "full_time_paths", "interval",
    "is_tlg_star", "is_tlg_star_star", "meet_join", "moralize", "mrf_adjacency",
    "order_leq", "replay", "time_paths", "validate_tlg",
]
