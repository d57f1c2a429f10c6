"""Moving H_t by an element of SU(4) that is not a g_a-isometry.

The image is still Hopf for the Kaehler structure, but its angle function is no
longer constant, and the non-horizontal frame applies.  We check the frame
relation alpha(e_i, e_3) = e_i(theta) + delta_{i5}/2 and the Gauss/Codazzi
residuals.
"""

import numpy as np

from cp3geom import family as fm
from cp3geom import hyper as hy
from cp3geom.halgebra import random_su4, random_unit_quaternion

rng = np.random.default_rng(11)
U = random_su4(rng)
chart = fm.family_chart(0.6, random_unit_quaternion(rng), random_unit_quaternion(rng), U=U)

for x in (np.zeros(5), np.full(5, 0.1), np.array([0.2, -0.1, 0.0, 0.3, -0.2])):
    sd = hy.second_fundamental_form(2.0, chart, x)
    e_theta = hy.frame_angle_derivatives(chart, x, sd)
    print(f"theta = {sd.theta:.4f} ({hy.classify(sd.theta)}), "
          f"alpha(e_i,e_3) - e_i(theta) = {np.round(sd.alpha[:, 2] - e_theta, 8)}")

print("Kaehler Hopf at a = 1:", hy.is_hopf(hy.second_fundamental_form(1.0, chart, np.zeros(5)), "J1"))
print("Gauss residual:  ", hy.gauss_residual(2.0, chart, np.zeros(5)))
print("Codazzi residual:", hy.codazzi_residual(2.0, chart, np.zeros(5)))
