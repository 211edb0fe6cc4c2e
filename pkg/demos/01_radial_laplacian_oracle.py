"""Warm-up: the log-radial mesh and its Laplacian against a closed form.

In three dimensions the problem

    -Lap w = r^-4,   w'(1) = 0,   w -> 0 at infinity

has the exact solution w(r) = 1/r - 1/(2 r^2).  We discretize the exterior
of the unit ball on a log-spaced mesh, solve the tridiagonal system, and
watch the error shrink at second order as the mesh doubles.
"""

import numpy as np

from gmext import assemble_operator, build_grid, solve_linear

print(__doc__)

for n in (1025, 2049, 4097, 8193):
    grid = build_grid(r0=1.0, R=1e4, n=n)
    op = assemble_operator(grid, N=3)
    exact = 1.0 / grid.r - 0.5 / grid.r ** 2
    w = solve_linear(op, grid.r ** -4.0, outer_value=float(exact[-1]))
    err = np.max(np.abs(w.values - exact) / exact)
    print(f"n = {n:5d}   max relative error = {err:.3e}")

print("\nEach doubling divides the error by about four: the ghost-node")
print("Neumann row and the central interior stencil are both second order.")
