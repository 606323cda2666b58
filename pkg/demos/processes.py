"""
Brownian motion indexed by a time-like graph
============================================

"""

import numpy as np

from tlg import fixtures
from tlg.graph import GraphPoint
from tlg.paths import full_time_paths
from tlg.process import Brownian, build_model, exact_joint, naive_counterexample, sample_paths, variance_along_paths

# exact law on a graph with a cell
g = fixtures.coupling()
m = build_model(g, Brownian())
print("max |Var X(t) - t| along paths:", variance_along_paths(m, full_time_paths(g)))

# points on the two sides of a cell are correlated only through its ends
gv = exact_joint(m, [GraphPoint(0, 0.2), GraphPoint(1, 0.1)])
print("cross covariance:\n", gv.cov)

# Monte Carlo agrees with the exact covariance
real = sample_paths(m, 2, 20000, 1)
print("MC Var at exit:", real.at(g.vertex_ids[-1]).var())

# building bridges in the wrong order on a crossing graph
r = naive_counterexample()
print("naive E[X(t1)X(t3)]:", r["naive"], "Brownian min(t1, t3):", r["brownian"])
print("ratio:", np.round(r["naive"] / r["brownian"], 4))
