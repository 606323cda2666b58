"""Time-like graph data model: vertices with times, forward edges, points."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property


class GraphError(ValueError):
    """Malformed graph input."""


@dataclass(frozen=True)
class Vertex:
    id: int
    time: float


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int


@dataclass(frozen=True)
class GraphPoint:
    """A location on an edge. Endpoint times resolve to the shared vertex."""

    edge: int
    time: float


class TimeLikeGraph:
    """Immutable DAG whose vertices carry times and whose edges run forward.

    Vertices are kept ordered by (time, id), edges by id. Construction only
    checks that edges reference known vertices; use validate_tlg for the
    time and degree clauses.
    """

    def __init__(self, vertices, edges, kind: str = "simple"):
        if kind not in ("simple", "general"):
            raise GraphError(f"unknown kind {kind!r}")
        vs = [v if isinstance(v, Vertex) else Vertex(int(v[0]), float(v[1])) for v in vertices]
        es = [e if isinstance(e, Edge) else Edge(int(e[0]), int(e[1]), int(e[2])) for e in edges]
        self.kind = kind
        self.vertices = tuple(sorted(vs, key=lambda v: (v.time, v.id)))
        self.edges = tuple(sorted(es, key=lambda e: e.id))
        self._time = {}
        for v in self.vertices:
            if v.id in self._time:
                raise GraphError(f"duplicate vertex id {v.id}")
            self._time[v.id] = v.time
        self._edge = {}
        for e in self.edges:
            if e.id in self._edge:
                raise GraphError(f"duplicate edge id {e.id}")
            for end in (e.tail, e.head):
                if end not in self._time:
                    raise GraphError(f"edge {e.id} references unknown vertex {end}")
            self._edge[e.id] = e
        self.out_edges = {v.id: [] for v in self.vertices}
        self.in_edges = {v.id: [] for v in self.vertices}
        for e in self.edges:
            self.out_edges[e.tail].append(e.id)
            self.in_edges[e.head].append(e.id)

    # basic accessors

    def time(self, v: int) -> float:
        return self._time[v]

    def edge(self, e: int) -> Edge:
        return self._edge[e]

    def has_vertex(self, v: int) -> bool:
        return v in self._time

    def has_edge(self, e: int) -> bool:
        return e in self._edge

    @property
    def vertex_ids(self) -> list[int]:
        return [v.id for v in self.vertices]

    @property
    def edge_ids(self) -> list[int]:
        return [e.id for e in self.edges]

    def degree(self, v: int) -> int:
        return len(self.out_edges[v]) + len(self.in_edges[v])

    def entrances(self) -> list[int]:
        return [v.id for v in self.vertices if not self.in_edges[v.id]]

    def exits(self) -> list[int]:
        return [v.id for v in self.vertices if not self.out_edges[v.id]]

    def __len__(self) -> int:
        return len(self.vertices)

    # reachability

    @cached_property
    def _desc(self) -> dict[int, frozenset]:
        desc: dict[int, frozenset] = {}
        for v in reversed(self.vertices):
            acc = {v.id}
            for e in self.out_edges[v.id]:
                acc |= desc[self._edge[e].head]
            desc[v.id] = frozenset(acc)
        return desc

    @cached_property
    def _anc(self) -> dict[int, frozenset]:
        anc: dict[int, frozenset] = {}
        for v in self.vertices:
            acc = {v.id}
            for e in self.in_edges[v.id]:
                acc |= anc[self._edge[e].tail]
            anc[v.id] = frozenset(acc)
        return anc

    def descendants(self, v: int) -> frozenset:
        """Vertices reachable from v by a time-path, v included."""
        return self._desc[v]

    def ancestors(self, v: int) -> frozenset:
        return self._anc[v]

    def reaches(self, u: int, v: int) -> bool:
        return v in self._desc[u]

    # points

    def resolve(self, p) -> tuple:
        """Normalize a vertex id or GraphPoint to ('v', id) or ('e', edge, time)."""
        if isinstance(p, GraphPoint):
            if p.edge not in self._edge:
                raise GraphError(f"point on unknown edge {p.edge}")
            e = self._edge[p.edge]
            t0, t1 = self._time[e.tail], self._time[e.head]
            if not t0 - 1e-12 <= p.time <= t1 + 1e-12:
                raise GraphError(f"time {p.time} off edge {p.edge} [{t0}, {t1}]")
            if abs(p.time - t0) <= 1e-12:
                return ("v", e.tail)
            if abs(p.time - t1) <= 1e-12:
                return ("v", e.head)
            return ("e", p.edge, float(p.time))
        if isinstance(p, tuple) and p and p[0] in ("v", "e"):
            return p
        v = int(p)
        if v not in self._time:
            raise GraphError(f"unknown vertex {v}")
        return ("v", v)

    def point_time(self, loc) -> float:
        loc = self.resolve(loc)
        return self._time[loc[1]] if loc[0] == "v" else loc[2]

    # serialization

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [{"id": v.id, "time": v.time} for v in self.vertices],
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "TimeLikeGraph":
        try:
            kind = data.get("kind", "simple")
            vs = [Vertex(int(v["id"]), float(v["time"])) for v in data["vertices"]]
            es = [Edge(int(e["id"]), int(e["tail"]), int(e["head"])) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"missing or bad field: {exc}") from exc
        return cls(vs, es, kind)

    @classmethod
    def loads(cls, text: str) -> "TimeLikeGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"line {exc.lineno}: {exc.msg}") from exc
        return cls.from_dict(data)

    def canonical(self) -> tuple:
        return (
            self.kind,
            tuple((v.id, v.time) for v in self.vertices),
            tuple((e.id, e.tail, e.head) for e in self.edges),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, TimeLikeGraph) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"TimeLikeGraph({self.kind}, {len(self.vertices)} vertices, {len(self.edges)} edges)"

    def with_kind(self, kind: str) -> "TimeLikeGraph":
        return TimeLikeGraph(self.vertices, self.edges, kind)

    def next_vertex_id(self) -> int:
        return max(self._time, default=-1) + 1

    def next_edge_id(self) -> int:
        return max(self._edge, default=-1) + 1


def isomorphic_by_times(g: TimeLikeGraph, h: TimeLikeGraph) -> bool:
    """Equality of vertex times and incidence, ignoring ids of edges."""
    if sorted(v.time for v in g.vertices) != sorted(v.time for v in h.vertices):
        return False

    def sig(x):
        return sorted((x.time(e.tail), x.time(e.head), e.tail, e.head) for e in x.edges)

    return sig(g) == sig(h)


@dataclass
class ValidationReport:
    ok: bool
    clauses: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)


def validate_tlg(graph, kind: str | None = None) -> ValidationReport:
    """Check the time-ordering and degree clauses of a time-like graph.

    Accepts a TimeLikeGraph or its JSON dict. Dangling edge ids raise GraphError.
    """
    g = graph if isinstance(graph, TimeLikeGraph) else TimeLikeGraph.from_dict(graph)
    kind = kind or g.kind
    problems = []
    forward = True
    for e in g.edges:
        if not g.time(e.tail) < g.time(e.head):
            forward = False
            problems.append(f"edge {e.id} does not run forward in time")
    nonzero = True
    for v in g.vertex_ids:
        if g.degree(v) == 0:
            nonzero = False
            problems.append(f"vertex {v} has degree 0")
    clauses = {"nonempty": bool(g.vertices), "time_order": forward, "nonzero_degree": nonzero}
    if not g.vertices:
        problems.append("graph has no vertices")
    if kind == "simple":
        ent, ex = g.entrances(), g.exits()
        clauses["unique_entrance"] = len(ent) == 1
        clauses["unique_exit"] = len(ex) == 1
        if len(ent) != 1:
            problems.append(f"entrances {ent}")
        if len(ex) != 1:
            problems.append(f"exits {ex}")
        if g.vertices:
            tmin, tmax = g.vertices[0].time, g.vertices[-1].time
            ends = all(g.time(v) == tmin for v in ent) and all(g.time(v) == tmax for v in ex)
            ends = ends and sum(1 for v in g.vertices if v.time == tmin) == 1
            ends = ends and sum(1 for v in g.vertices if v.time == tmax) == 1
            clauses["extreme_times"] = ends
            if not ends:
                problems.append("entrance/exit are not the unique earliest/latest vertices")
    return ValidationReport(all(clauses.values()), clauses, problems)
