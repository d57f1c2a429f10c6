"""Obstruction scalars: quantities whose non-vanishing rules out a class of hypersurfaces."""

import numpy as np

from cp3geom import hyper as hy

print(f"{'a':>8} {'Codazzi hor':>12} {'direct':>12} {'TU printed':>11} {'TU direct':>10}")
for a in (0.05, 0.5, 1.0, 2.0, 5.0, 50.0):
    c = hy.codazzi_obstruction(a)
    t = hy.tu_obstruction(a)
    print(f"{a:8.2f} {c.closed_form:12.6f} {c.numeric:12.6f} {t.closed_form:11.5f} {t.numeric:10.5f}")

print("\nnon-horizontal Codazzi scalar at a = 2 (direct value carries the opposite sign):")
for theta in (0.2, 0.6, 1.0, 1.4):
    o = hy.codazzi_obstruction(2.0, theta)
    print(f"  theta={theta:.1f}: closed {o.closed_form:.6f}, direct {o.numeric:.6f}")

rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    al = rng.standard_normal((5, 5))
    al = al + al.T
    worst = max(worst, abs(hy.csc_rhs_cyclic(al, *rng.standard_normal((4, 5)))))
print("\nCSC cyclic right-hand side, max over 200 draws:", worst)
