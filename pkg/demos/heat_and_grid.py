"""
Heat equation with noise and the rhombus grid
=============================================

"""

import numpy as np

from tlg.rhombus import RhombusGrid, interpolate_nbm, residual_check, sample_grid_nbm
from tlg.she import euler_she, llt_gap, mild_field, window_mse

# walk kernel against the Gaussian: the gap shrinks like 1/n
for n in (64, 256, 1024):
    print(n, "n * gap =", round(llt_gap(n, n)["gap"] * n, 5))

# the Euler field is exactly its discrete Green's-function sum
f = euler_she(256, rng=0)
print("Green identity error:", np.max(np.abs(mild_field(f, "a") - f.values)))
print("MSE to continuum kernel:", window_mse(f, mild_field(f, "b")))

# rhombus grid: bridges between neighbouring columns
grid = RhombusGrid(64, 0.0, 1.0, 0.5)
gf = sample_grid_nbm(grid, 3, refine=4)
print("residual variance check:", residual_check(gf))

# continuous interpolation and its value at a lattice point
ev = interpolate_nbm(gf)
print("Y(0.5, 0.25) =", ev.Y(0.5, 0.25), "lattice", gf.value(4, 16))
