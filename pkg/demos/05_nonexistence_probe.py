"""Watching nonexistence happen on growing truncations.

At N = 3, m = 2 the inhibitor source inherited from the activator's
superharmonic floor decays exactly like r^-2, whose first moment diverges:
no positive decaying inhibitor can exist.  On any finite truncation the
problem still solves, but the solution betrays the obstruction: its
superharmonic profile w * r^(N-2) keeps growing with the truncation radius
while flattening toward the outer boundary, so the normalized floor
(window minimum over window maximum) collapses toward zero.

For contrast, an integrable source (alpha = 4) holds both numbers steady.
"""

from gmext import (
    ExponentSet,
    NonlinearitySpec,
    SourceEnvelope,
    assemble_operator,
    degeneration_probe,
    grid_for_decades,
    solve_monotone,
)

print(__doc__)

params = ExponentSet(N=3, p=5, q=1, m=2, s=1, k=4)
report = degeneration_probe(params, SourceEnvelope.radial(1.0, 4.0), (1e2, 1e3, 1e4))
for line in report.lines():
    print(line)

print("\nexistence-side contrast (alpha = 4, same truncations):")
for R in (1e2, 1e3, 1e4):
    grid = grid_for_decades(1.0, R, 512)
    op = assemble_operator(grid, 3)
    res = solve_monotone(op, grid.r ** -4.0, NonlinearitySpec.power(1.0),
                         outer="extrapolate")
    lo, hi = grid.r0 * 10 ** 0.5, R * 10 ** -0.5
    mask = grid.window_mask(lo, hi)
    prof = res.w.values[mask] * grid.r[mask]
    print(f"  R={R:<8g} floor={prof.min():.4f}  peak={prof.max():.4f}  "
          f"floor/peak={prof.min()/prof.max():.4f}")

print("\nThe integrable case settles; the critical case degenerates.")
