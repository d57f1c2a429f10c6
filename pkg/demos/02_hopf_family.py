"""The family H_t: one table row per t on the grid.

For each t we build the exact chart of psi_t(S^3 x S^3) around a random point,
compute the shape operator in g_a and compare with the closed forms.
"""

import numpy as np

from cp3geom import family as fm
from cp3geom import hyper as hy
from cp3geom.halgebra import random_unit_quaternion

rng = np.random.default_rng(3)
print(f"{'t':>6} {'theta_a':>9} {'lam(J)':>9} {'closed':>9} {'trace/3':>9} {'scal a=2':>9} {'printed':>9}")
for t in fm.T_GRID:
    sd = fm.family_shape_data(2.0, t, random_unit_quaternion(rng), random_unit_quaternion(rng))
    ok, lam = hy.is_hopf(sd)
    pr, num, _ = fm.scalar_curvature_family(2.0, t)
    print(f"{t:6.3f} {sd.theta_a:9.1e} {lam:9.5f} {fm.hopf_eigen(t):9.5f} "
          f"{hy.mean_curvature(sd) / 3:9.5f} {num:9.4f} {pr:9.4f}")

# Fubini-Study principal curvatures at t = pi/6
sd = fm.family_shape_data(1.0, np.pi / 6, random_unit_quaternion(rng), random_unit_quaternion(rng))
print("\nFS principal curvatures at pi/6:", np.round(hy.principal_curvatures(sd)[0], 6))
print("expected                        :", np.round(fm.fubini_study_principal(np.pi / 6), 6))

# mirror pairs are intrinsically equal and extrinsically distinct
s = np.pi / 8
print("\nmirror isometry residual:", fm.mirror_isometry_check(s, 2.0))
print("mean curvature at s+/s-: ", fm.mean_curvature_family(2.0, np.pi / 4 + s)[1],
      fm.mean_curvature_family(2.0, np.pi / 4 - s)[1])
print("twistor image at pi/6:   ", fm.twistor_image(np.pi / 6))
