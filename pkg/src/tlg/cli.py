"""Command-line front end.

Exit codes: 0 success, 2 verification negative, 1 error. Stochastic
commands need --seed or TLG_SEED. Outputs go to --out (default
out/<command>) and are never overwritten without --force.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import fixtures
from .graph import GraphError, GraphPoint, TimeLikeGraph, validate_tlg
from .output import OutputDir
from .rng import default_seed, stream

OK, ERROR, NEGATIVE = 0, 1, 2


class Negative(Exception):
    pass


def load_graph(spec: str) -> TimeLikeGraph:
    """A JSON graph file, or the name of a built-in fixture."""
    p = Path(spec)
    if p.exists():
        try:
            return TimeLikeGraph.loads(p.read_text())
        except GraphError as exc:
            raise click.ClickException(f"{spec}: {exc}") from exc
    name = p.stem if p.suffix == ".json" else spec
    if name in fixtures.ALL:
        return fixtures.get(name)
    raise click.ClickException(f"{spec}: no such file or fixture")


def load_family(spec: str):
    from .process import family_from_spec

    if spec.strip().startswith("{"):
        return family_from_spec(json.loads(spec))
    p = Path(spec)
    if p.exists():
        return family_from_spec(json.loads(p.read_text()))
    return family_from_spec({"kind": spec})


def need_seed(seed):
    try:
        return default_seed(seed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


def out_dir(ctx, out, force) -> OutputDir:
    path = out or f"out/{ctx.info_name}"
    return OutputDir(path, force)


def floats(s: str) -> list:
    return [float(x) for x in s.split(",") if x.strip()]


def ints(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip()]


def common(f):
    f = click.option("--force", is_flag=True, help="Overwrite existing outputs.")(f)
    f = click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory.")(f)
    return f


def seeded(f):
    return click.option("--seed", type=int, default=None, help="64-bit seed (else TLG_SEED).")(f)


@click.group()
def cli():
    """Time-like graphs and processes indexed by them."""


@cli.command()
@click.argument("graph")
@click.option("--cap", type=int, default=10**6, help="Path enumeration cap.")
@common
@click.pass_context
def verify(ctx, graph, cap, out, force):
    """Print TLG / TLG* / TLG** verdicts; write the tower when one exists."""
    from .embed import is_tlg_star_star
    from .stingy import is_tlg_star

    g = load_graph(graph)
    rep = validate_tlg(g)
    click.echo(f"TLG: {'yes' if rep.ok else 'no'}")
    for p in rep.problems:
        click.echo(f"  {p}")
    verdicts = {"tlg": rep.ok}
    tower = None
    if rep.ok and g.kind == "simple":
        star = is_tlg_star(g, cap=cap)
        verdicts["tlg_star"] = star.verdict
        click.echo(f"TLG*: {'yes' if star else 'no'}")
        if not star:
            click.echo(f"  {star.reason}")
        tower = star.tower
    general = validate_tlg(g, "general").ok
    if general:
        ss = is_tlg_star_star(g.with_kind("general"), cap=cap)
        verdicts["tlg_star_star"] = ss.verdict
        click.echo(f"TLG**: {'yes' if ss else 'no'}")
        if not ss:
            click.echo(f"  {ss.reason}")
        if tower is None and ss:
            tower = ss.tower
    od = out_dir(ctx, out, force)
    od.json("verdict.json", verdicts)
    if tower is not None:
        od.text("tower.json", tower.dumps())
    od.manifest("verify", {"graph": graph, "cap": cap}, None)
    key = "tlg_star" if g.kind == "simple" else "tlg_star_star"
    return OK if verdicts.get(key, False) else NEGATIVE


def _model(g, family):
    from .process import build_model

    try:
        return build_model(g, load_family(family))
    except GraphError as exc:
        raise Negative(str(exc)) from exc


@cli.command()
@click.argument("graph")
@click.option("--family", default="brownian", help="Family name, JSON spec, or JSON file.")
@click.option("--resolution", type=int, default=3, help="Interior points per edge.")
@click.option("--reps", type=int, default=1)
@seeded
@common
@click.pass_context
def sample(ctx, graph, family, resolution, reps, seed, out, force):
    """Sample the process on every edge."""
    from .process import sample_paths

    seed = need_seed(seed)
    g = load_graph(graph)
    model = _model(g, family)
    real = sample_paths(model, resolution, reps, stream(seed, "sample"))
    od = out_dir(ctx, out, force)
    od.csv("samples.csv", ["rep", "edge", "time", "value"], real.rows())
    od.manifest("sample", {"graph": graph, "family": family, "resolution": resolution, "reps": reps}, seed)
    return OK


def _label(p) -> str:
    return f"v{p}" if not isinstance(p, GraphPoint) else f"e{p.edge}@{p.time!r}"


@cli.command()
@click.argument("graph")
@click.option("--family", default="brownian")
@click.option("--per-edge", type=int, default=0, help="Interior points per edge.")
@common
@click.pass_context
def covariance(ctx, graph, family, per_edge, out, force):
    """Exact covariance at vertices and interior edge points."""
    from .process import exact_joint

    g = load_graph(graph)
    model = _model(g, family)
    pts = list(g.vertex_ids)
    for e in g.edges:
        t0, t1 = g.time(e.tail), g.time(e.head)
        pts += [GraphPoint(e.id, t0 + (t1 - t0) * i / (per_edge + 1)) for i in range(1, per_edge + 1)]
    gv = exact_joint(model, pts)
    labels = [_label(p) for p in pts]
    od = out_dir(ctx, out, force)
    od.csv("covariance.csv", ["point"] + labels, ([labels[i]] + list(gv.cov[i]) for i in range(len(pts))))
    od.pgm("covariance.pgm", gv.cov)
    od.manifest("covariance", {"graph": graph, "family": family, "per_edge": per_edge}, None)
    return OK


@cli.command()
@click.argument("graph")
@click.option("--family", default="brownian")
@click.option("--tol", type=float, default=1e-9)
@common
@click.pass_context
def cellcheck(ctx, graph, family, tol, out, force):
    """Cell-Markov and moral-graph-Markov checks."""
    from .cells import find_cells
    from .process import check_cell_markov, check_moral_graph_markov

    g = load_graph(graph)
    model = _model(g, family)
    rows, ok = [], True
    for c in find_cells(g, half_cells=False):
        if c.truly_simple:
            r = check_cell_markov(model, c)
            good = r["partial_cov"] <= tol
        else:
            r, good = {"partial_cov": float("nan")}, True
        ok &= good
        rows.append([c.start, c.end, " ".join(map(str, c.side_a)), " ".join(map(str, c.side_b)),
                     c.classification, r["partial_cov"], good])
    moral = check_moral_graph_markov(model)
    ok &= moral["pass"]
    click.echo(f"cells: {len(rows)}, moral precision zeros match: {moral['pass']}")
    od = out_dir(ctx, out, force)
    od.csv("cells.csv", ["start", "end", "side_a", "side_b", "class", "partial_cov", "pass"], rows)
    od.json("moral.json", {"vertices": moral["kept"], "pinned": moral["pinned"],
                           "max_nonadjacent": moral["max_nonadjacent"], "pass": moral["pass"]})
    od.manifest("cellcheck", {"graph": graph, "family": family, "tol": tol}, None)
    click.echo("pass" if ok else "fail")
    return OK if ok else NEGATIVE


@cli.command()
@click.option("--n", type=int, default=256)
@click.option("--T", "T", type=float, default=1.0)
@click.option("--X", "X", type=float, default=1.0)
@click.option("--noise", type=click.Choice(["standard", "wide"]), default="standard")
@seeded
@common
@click.pass_context
def she(ctx, n, T, X, noise, seed, out, force):
    """Euler scheme for the stochastic heat equation and its noise-sum check."""
    from .she import euler_she, mild_field, window_mse

    seed = need_seed(seed)
    f = euler_she(n, T, X, stream(seed, "she", n), noise)
    green = float(np.max(np.abs(mild_field(f, "a") - f.values)))
    mse = window_mse(f, mild_field(f, "b"), T, X)
    click.echo(f"green identity error {green:.3e}, mse vs continuum kernel {mse:.4e}")
    od = out_dir(ctx, out, force)
    od.csv("field.csv", ["j", "k", "t", "x", "value"], f.rows())
    od.pgm("field.pgm", f.values)
    od.json("summary.json", {"green_error": green, "mse": mse, "n": n})
    od.manifest("she", {"n": n, "T": T, "X": X, "noise": noise}, seed)
    return OK


def _probes(s: str) -> list:
    out = []
    for part in s.split(";"):
        if part.strip():
            t, x = part.split(":")
            out.append((float(t), float(x)))
    return out


def _display(w: np.ndarray) -> np.ndarray:
    """Off-lattice cells get the mean of their on-lattice x neighbours."""
    pad = np.pad(w, ((0, 0), (1, 1)), constant_values=np.nan)
    nb = np.stack([pad[:, :-2], pad[:, 2:]])
    cnt = np.isfinite(nb).sum(axis=0)
    side = np.where(cnt > 0, np.nansum(nb, axis=0) / np.maximum(cnt, 1), np.nan)
    return np.where(np.isfinite(w), w, side)


@cli.command()
@click.option("--alpha", type=float, default=0.0)
@click.option("--n", type=int, default=256)
@click.option("--window", default="1,1", help="T,X")
@click.option("--probes", default="", help="t:x;t:x ...")
@click.option("--reps", type=int, default=0, help="Replicates for probe variances.")
@click.option("--refine", type=int, default=1)
@click.option("--noise", type=click.Choice(["standard", "wide"]), default="standard")
@seeded
@common
@click.pass_context
def rhombus(ctx, alpha, n, window, probes, reps, refine, noise, seed, out, force):
    """Natural Brownian motion on the rhombus grid."""
    from .rhombus import RhombusGrid, interpolate_nbm, sample_grid_nbm

    seed = need_seed(seed)
    T, X = floats(window)
    grid = RhombusGrid(n, alpha, T, X)
    f = sample_grid_nbm(grid, stream(seed, "rhombus-field").integers(2**63), refine, noise)
    od = out_dir(ctx, out, force)
    od.csv("field.csv", ["t", "x", "value"], f.rows())
    od.pgm("field.pgm", _display(f.window())[::-1])
    pr = _probes(probes)
    if pr and reps > 0:
        vals = np.empty((reps, len(pr)))
        for i in range(reps):
            ev = interpolate_nbm(sample_grid_nbm(grid, stream(seed, "rhombus", i).integers(2**63), refine, noise))
            vals[i] = [ev.Y(t, x) for t, x in pr]
        rows = []
        for (t, x), col in zip(pr, vals.T):
            sq = col**2
            rows.append([t, x, float(sq.mean()), float(sq.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0, abs(t)])
        od.csv("probes.csv", ["t", "x", "var", "se", "target"], rows)
    od.manifest("rhombus", {"alpha": alpha, "n": n, "window": [T, X], "probes": pr, "reps": reps,
                            "refine": refine, "noise": noise}, seed)
    return OK


@cli.command()
@click.option("--rate", type=float, default=1.0)
@click.option("--offspring", default="0,0,1", help="Table p_0,...,p_K.")
@click.option("--horizon", type=float, default=2.0)
@click.option("--dt", type=float, default=0.01)
@click.option("--start", type=float, default=0.0, help="Root value of the branching motion.")
@seeded
@common
@click.pass_context
def gwtree(ctx, rate, offspring, horizon, dt, start, seed, out, force):
    """Galton-Watson time-like tree with branching Brownian motion."""
    from .embed import is_tlg_star_star
    from .gwtree import population_curve, sample_branching_markov, sample_gw_tlt, tlt_to_tlg

    seed = need_seed(seed)
    tree = sample_gw_tlt(rate, floats(offspring), horizon, stream(seed, "gw-tree"))
    g, edge_of = tlt_to_tlg(tree)
    ok = is_tlg_star_star(g).verdict
    bf = sample_branching_markov(tree, dt, stream(seed, "gw-field"), start)
    times = np.linspace(0.0, horizon, 101)
    pc = population_curve(tree, times)
    od = out_dir(ctx, out, force)
    od.text("tree.json", g.dumps())
    od.csv("nodes.csv", ["node", "edge", "birth", "lifetime", "offspring"],
           ([".".join(map(str, nd.label)) or "root", edge_of[nd.label], nd.birth, nd.lifetime, nd.offspring]
            for nd in tree.nodes))
    od.csv("field.csv", ["node", "time", "value"], bf.rows())
    od.csv("population.csv", ["time", "born", "alive"], zip(pc["times"], pc["born"], pc["alive"]))
    od.json("summary.json", {"nodes": len(tree.nodes), "tlg_star_star": ok})
    od.manifest("gwtree", {"rate": rate, "offspring": offspring, "horizon": horizon, "dt": dt,
                           "start": start}, seed)
    click.echo(f"nodes {len(tree.nodes)}, TLG**: {'yes' if ok else 'no'}")
    return OK if ok else NEGATIVE


@cli.command()
@click.option("--n-list", default="1,2,5,10")
@click.option("--reps", type=int, default=100000)
@click.option("--m", type=int, default=64, help="Bridge grid cells.")
@click.option("--method", type=click.Choice(["exact", "grid"]), default="exact")
@click.option("--beta", type=float, default=1.0)
@seeded
@common
@click.pass_context
def maxima(ctx, n_list, reps, m, method, beta, seed, out, force):
    """Moments of the max of n independent Brownian bridges."""
    from .gauss import bridge_max_stats

    seed = need_seed(seed)
    keys = ["n", "mean_M", "se_M", "mean_M2", "se_M2", "H_n", "four_E", "four_E_se", "two_E", "two_E_se",
            "mean_absM", "se_absM", "mean_absM2", "se_absM2", "sqrt_ln", "half_ln", "tail", "tail_se", "tail_exact"]
    rows = []
    for n in ints(n_list):
        s = bridge_max_stats(n, reps, stream(seed, "maxima", n), m, method, beta)
        rows.append([s[k] for k in keys])
        click.echo(f"n={n}: 4E={s['four_E']:.4f} +- {s['four_E_se']:.4f}, H_n={s['H_n']:.4f}")
    od = out_dir(ctx, out, force)
    od.csv("maxima.csv", keys, rows)
    od.manifest("maxima", {"n_list": n_list, "reps": reps, "m": m, "method": method, "beta": beta}, seed)
    return OK


@cli.command()
@click.option("--mc-reps", type=int, default=0, help="Monte Carlo replicates (0 = exact only).")
@seeded
@common
@click.pass_context
def counterexample(ctx, mc_reps, seed, out, force):
    """Naive bridge build on the non-TLG* graph against Brownian motion."""
    from .gauss import bridge_pair_cov, bridge_pair_mc
    from .process import naive_counterexample, sample_paths

    r = naive_counterexample()
    pair = bridge_pair_cov(0.4, 1.0, 0.6, 0.8)
    header = ["quantity", "engine", "reference", "brownian"]
    rows = [["E[X(t1)X(t3)]", r["naive"], r["reference"], r["brownian"]],
            ["bridge_pair(2/5,1,3/5,4/5)", pair, 8 / 15, 0.6]]
    if mc_reps > 0:
        seed = need_seed(seed)
        header += ["mc", "mc_se"]
        real = sample_paths(r["model"], 1, mc_reps, stream(seed, "counterexample"))
        prod = real.at(1) * real.at(3)
        rows[0] += [float(prod.mean()), float(prod.std(ddof=1) / math.sqrt(mc_reps))]
        bp = bridge_pair_mc(0.4, 1.0, 0.6, 0.8, mc_reps, stream(seed, "bridge-pair"))
        rows[1] += [bp["mc"], bp["se"]]
    for row in rows:
        click.echo("  ".join(f"{x:.6g}" if isinstance(x, float) else str(x) for x in row))
    od = out_dir(ctx, out, force)
    od.csv("table.csv", header, rows)
    od.manifest("counterexample", {"mc_reps": mc_reps}, seed if mc_reps > 0 else None)
    return OK


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="tlg", standalone_mode=False)
    except Negative as exc:
        click.echo(f"verification negative: {exc}", err=True)
        return NEGATIVE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return ERROR
    except click.ClickException as exc:
        exc.show()
        return ERROR
    except (FileExistsError, ValueError, GraphError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return ERROR
    return rv if isinstance(rv, int) else OK


if __name__ == "__main__":
    sys.exit(main())
