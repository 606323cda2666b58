"""Named example graphs."""

from __future__ import annotations

from fractions import Fraction

from .graph import TimeLikeGraph


def _graph(times, edges, kind="simple") -> TimeLikeGraph:
    vs = [(i, float(t)) for i, t in (times.items() if isinstance(times, dict) else enumerate(times))]
    es = [(i, a, b) for i, (a, b) in enumerate(edges)]
    return TimeLikeGraph(vs, es, kind)


def minimal() -> TimeLikeGraph:
    return _graph([0, 1], [(0, 1)])


def one_cell() -> TimeLikeGraph:
    """Two parallel edges from time 0 to time 1."""
    return _graph([0, 1], [(0, 1), (0, 1)])


def crossing() -> TimeLikeGraph:
    """Lattice failure: t1 v t2 and t3 ^ t4 are not unique. Not TLG*."""
    return _graph([Fraction(j, 5) for j in range(6)],
                  [(0, 1), (0, 2), (1, 4), (1, 3), (2, 3), (2, 4), (4, 5), (3, 5)])


def ladder() -> TimeLikeGraph:
    """Non-planar member of TLG*."""
    return _graph([Fraction(j, 7) for j in range(8)],
                  [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 4), (2, 5), (3, 6)])


def lattice_not_star() -> TimeLikeGraph:
    """Ten-vertex planar lattice on times j/9."""
    return _graph([Fraction(j, 9) for j in range(10)],
                  [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3), (2, 8), (4, 5), (4, 6),
                   (5, 7), (6, 7), (6, 8), (3, 9), (7, 9), (8, 9)])


LATTICE_TABLE = """
t1: o  t0 t1 t0 t1 t0 t1 t0
t2: t3 o  t2 t0 t0 t0 t0 t2
t3: t3 t3 o  t0 t1 t0 t1 t2
t4: t5 t8 t9 o  t4 t4 t4 t4
t5: t5 t9 t9 t5 o  t4 t5 t4
t6: t7 t8 t9 t6 t7 o  t6 t6
t7: t7 t9 t9 t7 t7 t7 o  t6
t8: t9 t8 t9 t8 t9 t8 t9 o
"""


def lattice_table() -> dict:
    """Expected (meet, join) for ordered pairs i < j of t1..t8.

    Row i, column j: above the diagonal the meet, below it the join.
    """
    rows = [line.split()[1:] for line in LATTICE_TABLE.strip().splitlines()]
    out = {}
    for i in range(1, 9):
        for j in range(1, 9):
            if i < j:
                meet = int(rows[i - 1][j - 1][1:])
                join = int(rows[j - 1][i - 1][1:])
                out[(i, j)] = (meet, join)
    return out


def collapse_breaks() -> TimeLikeGraph:
    """TLG* with a simple cell (0-5-6 side against 0-4-6 side) that is not truly simple.

    Vertices: 0 at 0, 1 at .2, 2 at .3, 3 at .7, 4 at .5, 5 at .6, 6 at 1.
    Collapsing the cell makes the common past of 5 and 3 have two maximal
    elements.
    """
    times = {0: 0.0, 1: 0.2, 2: 0.3, 4: 0.5, 5: 0.6, 3: 0.7, 6: 1.0}
    edges = [(0, 4), (4, 6), (0, 5), (5, 6), (0, 1), (0, 2), (1, 4), (2, 5), (1, 3), (2, 3), (3, 6)]
    return _graph(times, edges)


COLLAPSE_CELL = ((0, 1), (2, 3))


def coupling() -> TimeLikeGraph:
    """Two cells joined by one edge: times 0, 1/3, 2/3, 1."""
    return _graph([0, Fraction(1, 3), Fraction(2, 3), 1], [(0, 1), (0, 1), (1, 2), (2, 3), (2, 3)])


def double_cell() -> TimeLikeGraph:
    """Two cells in series joined at vertex 4."""
    return _graph([0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0],
                  [(0, 1), (1, 2), (2, 4), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)])


def nested() -> TimeLikeGraph:
    """A cell with a smaller cell on one side and a chord spanning both."""
    return _graph([0, 0.1, 0.3, 0.45, 0.6, 0.75, 0.9, 1.0],
                  [(0, 1), (1, 2), (2, 4), (1, 3), (3, 4), (4, 6), (1, 5), (5, 6), (6, 7), (0, 7), (2, 5)])


def two_meets() -> TimeLikeGraph:
    """General planar graph where t3 ^ t4 has two maximal elements."""
    times = {1: 0.0, 2: 0.25, 3: 0.5, 4: 0.75, 5: 1.0}
    edges = [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5)]
    return _graph(times, edges, "general")


def tree() -> TimeLikeGraph:
    """Root at 0 branching once at 0.4."""
    return _graph([0, 0.4, 1.0, 0.8], [(0, 1), (1, 2), (1, 3)], "general")


def tree2() -> TimeLikeGraph:
    """Two generations of binary branching."""
    return _graph([0, 0.3, 0.7, 0.5, 1.0, 0.9, 0.8, 1.0],
                  [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)], "general")


def planar_general() -> TimeLikeGraph:
    """Planar general graph with entrances at 0 and exits at 1."""
    return _graph([0, 0, 0.3, 0.6, 1, 1], [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (1, 3)], "general")


def two_components() -> TimeLikeGraph:
    return _graph([0, 1, 0.2, 0.8], [(0, 1), (2, 3)], "general")


ALL = {
    "minimal": minimal, "one_cell": one_cell, "crossing": crossing, "ladder": ladder, "lattice_not_star": lattice_not_star,
    "collapse_breaks": collapse_breaks, "coupling": coupling, "double_cell": double_cell, "nested": nested,
    "two_meets": two_meets, "tree": tree, "tree2": tree2, "planar_general": planar_general,
    "two_components": two_components,
}

STAR = ["minimal", "one_cell", "ladder", "collapse_breaks", "coupling", "double_cell", "nested"]


def get(name: str) -> TimeLikeGraph:
    try:
        return ALL[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(ALL)}") from None
