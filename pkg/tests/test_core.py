from fractions import Fraction

import pytest

from helpers import brute_cells, closure, count_full_paths
from tlg import fixtures
from tlg.cells import cell_collapse, classify_cell, find_cells
from tlg.embed import embed, embed_with_ends, is_tlg_star_star, moralize, mrf_adjacency
from tlg.graph import GraphError, GraphPoint, TimeLikeGraph, validate_tlg
from tlg.order import BOTTOM, TOP, meet_join, order_leq
from tlg.paths import PathCapExceeded, full_time_paths, interval
from tlg.stingy import is_tlg_star
from tlg.tower import Tower, replay


# validation

def test_minimal_is_valid_simple():
    rep = validate_tlg(fixtures.minimal())
    assert rep.ok and rep.clauses["unique_entrance"] and rep.clauses["unique_exit"]


def test_equal_time_edge_is_cited():
    g = TimeLikeGraph([(0, 0.0), (1, 0.5), (2, 0.5), (3, 1.0)], [(0, 0, 1), (1, 1, 2), (2, 2, 3)])
    rep = validate_tlg(g)
    assert not rep.ok and not rep.clauses["time_order"]
    assert any("edge 1" in p for p in rep.problems)


def test_two_components_general_not_simple():
    g = fixtures.two_components()
    assert validate_tlg(g, "general").ok
    assert not validate_tlg(g, "simple").ok


def test_dangling_edge_rejected_with_id():
    with pytest.raises(GraphError, match="7"):
        TimeLikeGraph([(0, 0.0), (1, 1.0)], [(0, 0, 7)])


def test_duplicate_vertex_rejected():
    with pytest.raises(GraphError):
        TimeLikeGraph([(0, 0.0), (0, 1.0)], [])


def test_vertices_sorted_by_time():
    g = TimeLikeGraph([(5, 1.0), (3, 0.0), (4, 0.5)], [(0, 3, 4), (1, 4, 5)])
    assert g.vertex_ids == [3, 4, 5]


def test_interior_vertex_needs_in_and_out_edge():
    g = TimeLikeGraph([(0, 0.0), (1, 0.5), (2, 1.0)], [(0, 0, 2), (1, 1, 2)])
    assert not validate_tlg(g).ok


def test_json_error_reports_line():
    with pytest.raises(GraphError, match="line 2"):
        TimeLikeGraph.loads('{"vertices": [],\n "edges": [,]}')


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_round_trip(name):
    g = fixtures.get(name)
    h = TimeLikeGraph.loads(g.dumps())
    assert h.canonical() == g.canonical()


# order

def test_order_reflexive_and_ends():
    g = fixtures.minimal()
    assert order_leq(g, 0, 0)
    assert order_leq(g, 0, 1)
    assert not order_leq(g, 1, 0)


def test_crossing_t1_not_below_t2():
    assert not order_leq(fixtures.crossing(), 1, 2)


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_vertex_order_matches_closure(name):
    g = fixtures.get(name)
    c = closure(g)
    for (a, b), want in c.items():
        assert order_leq(g, a, b) == want


def test_same_edge_points_ordered_by_time():
    g = fixtures.minimal()
    assert order_leq(g, GraphPoint(0, 0.2), GraphPoint(0, 0.7))
    assert not order_leq(g, GraphPoint(0, 0.7), GraphPoint(0, 0.2))


def test_parallel_edge_points_incomparable():
    g = fixtures.one_cell()
    p, q = GraphPoint(0, 0.3), GraphPoint(1, 0.6)
    assert not order_leq(g, p, q) and not order_leq(g, q, p)
    mj = meet_join(g, p, q)
    assert (mj.meet, mj.join, mj.unique) == (0, 1, True)


def test_meet_join_self():
    g = fixtures.lattice_not_star()
    for v in g.vertex_ids:
        mj = meet_join(g, v, v)
        assert mj.meet == v and mj.join == v


def test_lattice_not_star_lattice_table():
    g = fixtures.lattice_not_star()
    for (i, j), (meet, join) in fixtures.lattice_table().items():
        mj = meet_join(g, i, j)
        assert (mj.meet, mj.join, mj.unique) == (meet, join, True), (i, j)


def test_crossing_join_not_unique():
    mj = meet_join(fixtures.crossing(), 1, 2)
    assert not mj.unique
    assert set(mj.join_candidates) == {3, 4}


def test_bottom_and_top_sentinels():
    g = fixtures.two_components()
    mj = meet_join(g, 0, 2)
    assert mj.meet == BOTTOM and mj.join == TOP


def test_two_meets_meet_has_two_maxima():
    mj = meet_join(fixtures.two_meets(), 3, 4)
    assert not mj.unique and set(mj.meet_candidates) == {1, 2}


# paths

def test_path_counts_trivial():
    assert len(full_time_paths(fixtures.minimal())) == 1
    assert len(full_time_paths(fixtures.one_cell())) == 2


def test_crossing_path_count():
    # dynamic-programming count over the time order
    assert len(full_time_paths(fixtures.crossing())) == 4


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_path_count_matches_dp(name):
    g = fixtures.get(name)
    assert len(full_time_paths(g)) == count_full_paths(g)


def test_path_cap():
    with pytest.raises(PathCapExceeded):
        full_time_paths(fixtures.crossing(), cap=2)


def test_interval_whole_and_empty():
    g = fixtures.minimal()
    assert interval(g, 0, 1).canonical()[1:] == g.canonical()[1:]
    assert len(interval(fixtures.crossing(), 1, 2).vertices) == 0
    p = fixtures.crossing()
    assert interval(p, 0, 5).canonical()[1:] == p.canonical()[1:]


def test_interval_matches_closure():
    g = fixtures.lattice_not_star()
    c = closure(g)
    for a in g.vertex_ids:
        for b in g.vertex_ids:
            if c[a, b]:
                want = {w for w in g.vertex_ids if c[a, w] and c[w, b]}
                assert set(interval(g, a, b).vertex_ids) == want


def test_interval_unknown_vertex():
    with pytest.raises(GraphError):
        interval(fixtures.minimal(), 0, 9)


@pytest.mark.parametrize("name", fixtures.STAR)
def test_intervals_of_star_are_star(name):
    g = fixtures.get(name)
    for a in g.vertex_ids:
        for b in g.vertex_ids:
            if a != b and g.reaches(a, b):
                assert is_tlg_star(interval(g, a, b))


# cells

def test_one_cell():
    cells = find_cells(fixtures.one_cell())
    assert len(cells) == 1
    c = cells[0]
    assert (c.start, c.end, c.truly_simple) == (0, 1, True)


def test_tree_has_no_cells():
    assert find_cells(fixtures.tree(), half_cells=False) == []


@pytest.mark.parametrize("name", ["one_cell", "crossing", "collapse_breaks", "coupling", "double_cell", "nested"])
def test_cells_match_brute_force(name):
    g = fixtures.get(name)
    got = {frozenset((c.side_a, c.side_b)) for c in find_cells(g, half_cells=False)}
    assert got == brute_cells(g)


def test_collapse_breaks_cell_simple_not_truly_simple():
    g = fixtures.collapse_breaks()
    c = classify_cell(g, *fixtures.COLLAPSE_CELL)
    assert c.simple and not c.truly_simple
    assert c.classification == "simple"


def test_collapse_one_cell_gives_single_edge():
    g = fixtures.one_cell()
    h = cell_collapse(g, find_cells(g)[0])
    assert len(h.edges) == 1 and h.vertex_ids == [0, 1]


@pytest.mark.parametrize("name", fixtures.STAR)
def test_collapse_truly_simple_stays_star(name):
    g = fixtures.get(name)
    for c in find_cells(g, half_cells=False):
        if c.truly_simple:
            h = cell_collapse(g, c)
            assert validate_tlg(h).ok
            assert is_tlg_star(h), (name, c)


def test_collapse_simple_cell_of_collapse_breaks_leaves_star():
    g = fixtures.collapse_breaks()
    assert is_tlg_star(g)
    h = cell_collapse(g, classify_cell(g, *fixtures.COLLAPSE_CELL))
    assert validate_tlg(h).ok
    assert not is_tlg_star(h)
    assert not meet_join(h, 5, 3).unique


def test_collapse_rejects_foreign_cell():
    g = fixtures.one_cell()
    c = find_cells(g)[0]
    with pytest.raises(GraphError):
        cell_collapse(fixtures.minimal(), c)


def test_half_cells_on_general_graph():
    cells = find_cells(fixtures.planar_general())
    kinds = {c.kind for c in cells}
    assert "right-half" in kinds or "left-half" in kinds


# TLG* and TLG**

@pytest.mark.parametrize("name,want", [
    ("minimal", True), ("one_cell", True), ("ladder", True), ("collapse_breaks", True), ("coupling", True),
    ("double_cell", True), ("nested", True), ("crossing", False), ("lattice_not_star", False),
])
def test_star_verdicts(name, want):
    assert is_tlg_star(fixtures.get(name)).verdict is want


@pytest.mark.parametrize("name", fixtures.STAR)
def test_tower_replays_to_graph(name):
    g = fixtures.get(name)
    r = is_tlg_star(g)
    assert replay(r.tower).canonical() == g.canonical()
    t2 = Tower.from_dict(r.tower.to_dict())
    assert replay(t2).canonical() == g.canonical()


@pytest.mark.parametrize("name,want", [
    ("tree", True), ("tree2", True), ("planar_general", True), ("two_components", True), ("two_meets", False),
])
def test_star_star_verdicts(name, want):
    assert is_tlg_star_star(fixtures.get(name)).verdict is want


@pytest.mark.parametrize("name", ["tree", "tree2", "planar_general", "two_components"])
def test_star_star_tower_replays(name):
    g = fixtures.get(name)
    r = is_tlg_star_star(g)
    assert replay(r.tower, "general").canonical() == g.canonical()


def test_embedding_times():
    emb = embed_with_ends(fixtures.tree(), "maximal")
    times = sorted({emb.graph.time(emb.bottom), emb.graph.time(emb.top)})
    assert times == [-1.0, 2.0]
    assert validate_tlg(embed(fixtures.tree()), "simple").ok


def test_tower_rejects_edge_between_unconnected():
    t = Tower.from_dict({
        "seed": [0, 1, 0], "seed_times": [0.0, 1.0],
        "moves": [
            {"op": "add_vertex", "edge": 0, "vertex": 2, "time": 0.5, "left_edge": 1, "right_edge": 2},
            {"op": "add_edge", "tail": 0, "head": 1, "edge": 3},
            {"op": "add_vertex", "edge": 3, "vertex": 3, "time": 0.3, "left_edge": 4, "right_edge": 5},
            {"op": "add_edge", "tail": 3, "head": 2, "edge": 6},
        ],
    })
    with pytest.raises(GraphError):
        replay(t)


def test_moralize_adds_cell_ends():
    m = moralize(fixtures.coupling())
    pairs = {(e.tail, e.head) for e in m.edges} - {(e.tail, e.head) for e in fixtures.coupling().edges}
    assert pairs == set()
    extra = len(m.edges) - len(fixtures.coupling().edges)
    assert extra == 2


def test_mrf_adjacency_coupling():
    w, adj = mrf_adjacency(fixtures.coupling())
    assert w == [0, 1, 2, 3]
    assert adj == {frozenset(p) for p in [(0, 1), (1, 2), (2, 3)]}


def test_fixture_times_exact():
    assert fixtures.crossing().time(3) == float(Fraction(3, 5))
