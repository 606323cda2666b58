"""Time-path order on graph points, meets and joins."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import TimeLikeGraph

BOTTOM = "bottom"
TOP = "top"


def _leq(g: TimeLikeGraph, a: tuple, b: tuple) -> bool:
    if a[0] == "v" and b[0] == "v":
        return g.reaches(a[1], b[1])
    if a[0] == "e" and b[0] == "e" and a[1] == b[1]:
        return a[2] <= b[2]
    hi = a[1] if a[0] == "v" else g.edge(a[1]).head
    lo = b[1] if b[0] == "v" else g.edge(b[1]).tail
    return g.reaches(hi, lo)


def order_leq(g: TimeLikeGraph, p, q) -> bool:
    """True iff p precedes q on some time-path. Points are vertex ids or GraphPoints."""
    return _leq(g, g.resolve(p), g.resolve(q))


def _maximal(g: TimeLikeGraph, cands: set) -> list[int]:
    return sorted(w for w in cands if not any(x != w and g.reaches(w, x) for x in cands))


def _minimal(g: TimeLikeGraph, cands: set) -> list[int]:
    return sorted(w for w in cands if not any(x != w and g.reaches(x, w) for x in cands))


@dataclass(frozen=True)
class MeetJoin:
    meet: object
    join: object
    unique: bool
    meet_candidates: tuple
    join_candidates: tuple


def _out(loc):
    return loc[1] if loc[0] == "v" else loc


def meet_join(g: TimeLikeGraph, p, q) -> MeetJoin:
    """Greatest common lower bound and least common upper bound of two points.

    Vertices are returned as ids, interior points as ('e', edge, time). An
    empty common past gives BOTTOM, an empty common future TOP. Several
    maximal (minimal) candidates make the answer non-unique; the first
    candidate is reported and unique is False.
    """
    a, b = g.resolve(p), g.resolve(q)
    if _leq(g, a, b):
        return MeetJoin(_out(a), _out(b), True, (_out(a),), (_out(b),))
    if _leq(g, b, a):
        return MeetJoin(_out(b), _out(a), True, (_out(b),), (_out(a),))
    lo_a = a[1] if a[0] == "v" else g.edge(a[1]).tail
    lo_b = b[1] if b[0] == "v" else g.edge(b[1]).tail
    hi_a = a[1] if a[0] == "v" else g.edge(a[1]).head
    hi_b = b[1] if b[0] == "v" else g.edge(b[1]).head
    meets = _maximal(g, set(g.ancestors(lo_a) & g.ancestors(lo_b)))
    joins = _minimal(g, set(g.descendants(hi_a) & g.descendants(hi_b)))
    meet = meets[0] if meets else BOTTOM
    join = joins[0] if joins else TOP
    unique = len(meets) <= 1 and len(joins) <= 1
    return MeetJoin(meet, join, unique, tuple(meets) or (BOTTOM,), tuple(joins) or (TOP,))
