"""Construction towers: a seed edge plus a replayable list of moves.

Moves are dicts:
  {"op": "add_vertex", "edge", "vertex", "time", "left_edge", "right_edge"}
  {"op": "add_edge", "tail", "head", "edge"}
  {"op": "add_leaf", "vertex", "new_vertex", "time", "direction", "edge"}
  {"op": "add_component", "tail", "head", "tail_time", "head_time", "edge"}
add_leaf and add_component only occur in towers of general graphs.
Negative edge ids are temporary and are split away before the end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import GraphError, TimeLikeGraph


@dataclass
class Tower:
    seed: tuple
    seed_times: tuple
    moves: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": list(self.seed),
            "seed_times": list(self.seed_times),
            "moves": [dict(sorted(m.items())) for m in self.moves],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Tower":
        return cls(tuple(data["seed"]), tuple(data["seed_times"]), [dict(m) for m in data["moves"]])

    @property
    def is_star(self) -> bool:
        return all(m["op"] in ("add_vertex", "add_edge") for m in self.moves)


@dataclass
class Segment:
    """Edges grown from one seed/add_edge move, after all later splits."""

    anchors: tuple | None
    edges: list
    interior: list


class _Replayer:
    def __init__(self, tower: Tower):
        v0, v1, e = tower.seed
        t0, t1 = tower.seed_times
        if not t0 < t1:
            raise GraphError("seed edge must run forward in time")
        self.time = {v0: float(t0), v1: float(t1)}
        self.edges = {e: (v0, v1)}
        self.segment_of = {e: 0}
        self.segments = [Segment(None, [], [v0, v1])]

    def _reaches(self, a, b) -> bool:
        out: dict = {}
        for t, h in self.edges.values():
            out.setdefault(t, []).append(h)
        seen, todo = {a}, [a]
        while todo:
            x = todo.pop()
            if x == b:
                return True
            for y in out.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return False

    def _new_vertex(self, v, t):
        if v in self.time:
            raise GraphError(f"vertex {v} already exists")
        self.time[v] = float(t)

    def _new_edge(self, e, tail, head, seg):
        if e in self.edges:
            raise GraphError(f"edge {e} already exists")
        if not self.time[tail] < self.time[head]:
            raise GraphError(f"edge {e} does not run forward")
        self.edges[e] = (tail, head)
        self.segment_of[e] = seg

    def apply(self, m: dict):
        op = m["op"]
        if op == "add_vertex":
            e = m["edge"]
            if e not in self.edges:
                raise GraphError(f"add_vertex on unknown edge {e}")
            tail, head = self.edges.pop(e)
            seg = self.segment_of.pop(e)
            v, t = m["vertex"], m["time"]
            if not self.time[tail] < t < self.time[head]:
                raise GraphError(f"vertex {v} at {t} is not inside edge {e}")
            self._new_vertex(v, t)
            self._new_edge(m["left_edge"], tail, v, seg)
            self._new_edge(m["right_edge"], v, head, seg)
            self.segments[seg].interior.append(v)
        elif op == "add_edge":
            a, b = m["tail"], m["head"]
            if a not in self.time or b not in self.time:
                raise GraphError(f"add_edge between unknown vertices {a}, {b}")
            if not self._reaches(a, b):
                raise GraphError(f"add_edge {a}->{b}: endpoints not joined by a time-path")
            self.segments.append(Segment((a, b), [], []))
            self._new_edge(m["edge"], a, b, len(self.segments) - 1)
        elif op == "add_leaf":
            old, new, t = m["vertex"], m["new_vertex"], m["time"]
            if old not in self.time:
                raise GraphError(f"add_leaf at unknown vertex {old}")
            self._new_vertex(new, t)
            self.segments.append(Segment((old,), [], [new]))
            tail, head = (old, new) if m["direction"] == "forward" else (new, old)
            self._new_edge(m["edge"], tail, head, len(self.segments) - 1)
        elif op == "add_component":
            a, b = m["tail"], m["head"]
            self._new_vertex(a, m["tail_time"])
            self._new_vertex(b, m["head_time"])
            self.segments.append(Segment(None, [], [a, b]))
            self._new_edge(m["edge"], a, b, len(self.segments) - 1)
        else:
            raise GraphError(f"unknown move {op!r}")

    def finish(self, kind):
        if any(e < 0 for e in self.edges):
            raise GraphError("temporary edges remain after replay")
        for e, seg in self.segment_of.items():
            self.segments[seg].edges.append(e)
        for s in self.segments:
            s.edges.sort(key=lambda e: self.time[self.edges[e][0]])
            s.interior.sort(key=lambda v: self.time[v])
        g = TimeLikeGraph(list(self.time.items()), [(e, t, h) for e, (t, h) in self.edges.items()], kind)
        return g, self.segments


def replay(tower: Tower, kind: str = "simple") -> TimeLikeGraph:
    """Rebuild the graph a tower describes, checking every move's precondition."""
    r = _Replayer(tower)
    for m in tower.moves:
        r.apply(m)
    return r.finish(kind)[0]


def tower_segments(tower: Tower, kind: str = "simple") -> tuple[TimeLikeGraph, list[Segment]]:
    r = _Replayer(tower)
    for m in tower.moves:
        r.apply(m)
    return r.finish(kind)


class TowerBuilder:
    """Emit moves that grow whole paths, using temporary ids for unsplit edges."""

    def __init__(self, g: TimeLikeGraph):
        self.g = g
        self.moves: list = []
        self.seed = None
        self.seed_times = None
        self._tmp = 0

    def _temp(self) -> int:
        self._tmp -= 1
        return self._tmp

    def _split_chain(self, edge_id, path):
        g = self.g
        cur = edge_id
        for i, e in enumerate(path[:-1]):
            v = g.edge(e).head
            right = path[-1] if i == len(path) - 2 else self._temp()
            self.moves.append({"op": "add_vertex", "edge": cur, "vertex": v, "time": g.time(v),
                               "left_edge": e, "right_edge": right})
            cur = right

    def seed_path(self, path):
        g = self.g
        a, b = g.edge(path[0]).tail, g.edge(path[-1]).head
        first = path[0] if len(path) == 1 else self._temp()
        self.seed, self.seed_times = (a, b, first), (g.time(a), g.time(b))
        self._split_chain(first, path)

    def edge_path(self, path):
        g = self.g
        a, b = g.edge(path[0]).tail, g.edge(path[-1]).head
        first = path[0] if len(path) == 1 else self._temp()
        self.moves.append({"op": "add_edge", "tail": a, "head": b, "edge": first})
        self._split_chain(first, path)

    def leaf_path(self, path, direction):
        """A path whose one end is new: forward grows from its tail, backward into its head."""
        g = self.g
        a, b = g.edge(path[0]).tail, g.edge(path[-1]).head
        old, new = (a, b) if direction == "forward" else (b, a)
        first = path[0] if len(path) == 1 else self._temp()
        self.moves.append({"op": "add_leaf", "vertex": old, "new_vertex": new, "time": g.time(new),
                           "direction": direction, "edge": first})
        self._split_chain(first, path)

    def component_path(self, path):
        g = self.g
        a, b = g.edge(path[0]).tail, g.edge(path[-1]).head
        first = path[0] if len(path) == 1 else self._temp()
        self.moves.append({"op": "add_component", "tail": a, "head": b, "tail_time": g.time(a),
                           "head_time": g.time(b), "edge": first})
        self._split_chain(first, path)

    def tower(self) -> Tower:
        return Tower(self.seed, self.seed_times, self.moves)
