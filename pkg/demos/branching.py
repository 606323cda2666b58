"""
Branching Brownian motion on a Galton-Watson tree
=================================================

"""

from tlg import is_tlg_star_star
from tlg.gwtree import mean_population, population_curve, sample_branching_markov, sample_gw_tlt, tlt_to_tlg

# binary splitting at rate 1 up to time 2
tree = sample_gw_tlt(1.0, (0.0, 0.0, 1.0), 2.0, rng=7)
print("individuals:", len(tree.nodes))

# the tree is a general time-like graph in TLG**
g, edge_of = tlt_to_tlg(tree)
print("TLG**:", is_tlg_star_star(g).verdict)

# mean population against exp(t)
trees = [sample_gw_tlt(1.0, (0.0, 0.0, 1.0), 2.0, rng=s) for s in range(2000)]
alive = population_curve(trees, [0.5, 1.0, 2.0])["alive"]
print("mean alive:", alive.mean(axis=0), "expected", [mean_population(1.0, (0, 0, 1), t) for t in (0.5, 1, 2)])

# motion along each lifetime, continuous at births
f = sample_branching_markov(tree, 0.01, rng=1)
leaf = tree.nodes[-1].label
print("leaf", leaf, "value at 1:", f.ancestral_value(leaf, 1.0))
print("sampled rows:", sum(1 for _ in f.rows()))
