import math

import numpy as np
import pytest

from tlg.embed import is_tlg_star_star
from tlg.graph import validate_tlg
from tlg.gwtree import (
    TreeCapExceeded, mean_population, population_curve, sample_branching_markov, sample_gw_tlt, tlt_to_tlg,
)

TABLE = (0.25, 0.0, 0.75)


def test_no_offspring_gives_root_only():
    tr = sample_gw_tlt(1.0, (1.0,), 5.0, rng=1)
    assert len(tr.nodes) == 1 and tr.children(()) == []


def test_single_child_is_one_lineage():
    tr = sample_gw_tlt(2.0, (0.0, 1.0), 3.0, rng=2)
    pc = population_curve(tr, np.linspace(0, 2.99, 50))
    assert np.all(pc["alive"] == 1)
    assert all(len(nd.label) == i for i, nd in enumerate(tr.nodes))


def test_children_born_at_parent_death_before_horizon():
    tr = sample_gw_tlt(1.0, TABLE, 2.0, rng=3)
    for nd in tr.nodes:
        for c in tr.children(nd.label):
            assert tr.node(c).birth == nd.death < tr.horizon
        if nd.death >= tr.horizon:
            assert tr.children(nd.label) == []


def test_tlg_conversion():
    tr = sample_gw_tlt(1.0, TABLE, 2.0, rng=4)
    g, edge_of = tlt_to_tlg(tr)
    assert len(g.edges) == len(tr.nodes) and len(g.vertex_ids) == len(tr.nodes) + 1
    assert validate_tlg(g, "general").ok
    assert is_tlg_star_star(g).verdict
    root = g.edge(edge_of[()])
    assert g.time(root.tail) == 0.0


def test_root_survival_probability():
    # P(born(t) = 1) = P(lifetime > t) + P(lifetime <= t, R = 0)
    t = 0.7
    trees = [sample_gw_tlt(1.0, TABLE, 1.0, rng=s) for s in range(4000)]
    born = population_curve(trees, [t])["born"][:, 0]
    want = math.exp(-t) + (1 - math.exp(-t)) * TABLE[0]
    assert (born == 1).mean() == pytest.approx(want, abs=4 * math.sqrt(want * (1 - want) / 4000))


def test_mean_population():
    trees = [sample_gw_tlt(1.0, TABLE, 1.5, rng=s) for s in range(4000)]
    alive = population_curve(trees, [1.0])["alive"][:, 0]
    se = alive.std(ddof=1) / math.sqrt(alive.size)
    assert abs(alive.mean() - mean_population(1.0, TABLE, 1.0)) < 4 * se
    assert mean_population(1.0, TABLE, 1.0) == pytest.approx(math.exp(0.5))


def test_pgf_and_mean():
    tr = sample_gw_tlt(1.0, TABLE, 0.5, rng=0)
    assert tr.pgf(1.0) == pytest.approx(1.0)
    assert tr.pgf(0.0) == pytest.approx(0.25)
    assert tr.mean_offspring() == pytest.approx(1.5)


def test_validation_and_cap():
    with pytest.raises(ValueError):
        sample_gw_tlt(0.0, TABLE, 1.0)
    with pytest.raises(ValueError):
        sample_gw_tlt(1.0, (0.5, 0.6), 1.0)
    with pytest.raises(TreeCapExceeded):
        sample_gw_tlt(5.0, (0.0, 0.0, 1.0), 10.0, rng=0, cap=100)


def test_branching_motion_continuous_at_births():
    tr = sample_gw_tlt(1.0, TABLE, 2.0, rng=5)
    f = sample_branching_markov(tr, 0.01, rng=5, start=0.3)
    assert f.paths[()][1][0] == 0.3
    for nd in tr.nodes:
        for c in tr.children(nd.label):
            assert f.paths[c][1][0] == f.paths[nd.label][1][-1]
            assert f.paths[c][0][0] == f.paths[nd.label][0][-1]


def _split_tree(seed):
    # root dies early and splits in two; both children survive to the horizon
    for s in range(seed, seed + 1000):
        tr = sample_gw_tlt(1.0, (0.0, 0.0, 1.0), 1.0, rng=s)
        if len(tr.nodes) == 3:
            return tr
    raise AssertionError("no two-child tree found")


def test_ancestral_variance_and_sibling_independence():
    tr = _split_tree(0)
    ends, incs = [], []
    for s in range(3000):
        f = sample_branching_markov(tr, 0.05, rng=s)
        ends.append([f.value_at((1,), 1.0), f.value_at((2,), 1.0)])
        split = tr.node((1,)).birth
        incs.append([f.value_at((1,), 1.0) - f.value_at((1,), split),
                     f.value_at((2,), 1.0) - f.value_at((2,), split)])
        assert f.ancestral_value((1,), split / 2) == f.value_at((), split / 2)
    ends, incs = np.array(ends), np.array(incs)
    assert ends.var(axis=0) == pytest.approx([1.0, 1.0], rel=0.1)
    assert abs(np.corrcoef(incs.T)[0, 1]) < 4 / math.sqrt(3000)
    assert np.cov(ends.T)[0, 1] == pytest.approx(tr.node((1,)).birth, abs=0.1)


def test_rows_and_dt_validation():
    tr = sample_gw_tlt(1.0, TABLE, 1.0, rng=6)
    f = sample_branching_markov(tr, 0.1, rng=0)
    rows = list(f.rows())
    assert rows[0]["node"] == "root" and rows[0]["time"] == 0.0
    with pytest.raises(ValueError):
        sample_branching_markov(tr, 0.0)
