"""Why no analogous limit exists for Hermite rank m > 1.

For initial data H_m(xi(x)) with m > 1, the candidate limit field would be a
multiple stochastic integral whose variance is

    C * int over R^m of exp(-2 mu t (l_1 + ... + l_m)^2) dl_1 ... dl_m,

and that integral is infinite: the integrand is ~1 on a slab of fixed
thickness around the hyperplane l_1 + ... + l_m = 0, whose volume inside
[-R, R]^m grows like R^(m-1). Truncating at radius R makes the growth
visible; the rank-1 control integral converges instead.
"""

import math

import numpy as np

from frbesim import limits, quad

print("m = 2: truncated variance over [-R, R]^2  (expected growth ~ R)")
prev = None
for radius in (10.0, 20.0, 40.0, 80.0):
    v = limits.divergence_m(2, mu=1.0, t=1.0, radius=radius)
    note = f"   x{v / prev:.3f} per doubling" if prev else ""
    print(f"  R = {radius:5.0f}   integral = {v:12.4f}{note}")
    prev = v

print("\nm = 3: truncated variance over [-R, R]^3  (expected growth ~ R^2)")
prev = None
for radius in (5.0, 10.0, 20.0):
    v = limits.divergence_m(3, mu=1.0, t=1.0, radius=radius)
    note = f"   x{v / prev:.3f} per doubling" if prev else ""
    print(f"  R = {radius:5.0f}   integral = {v:12.4f}{note}")
    prev = v

ctrl = quad.integrate_line(lambda l: np.exp(-2.0 * l * l), tol=1e-12,
                           envelope=quad.GaussianEnvelope(2.0))
print(f"\nm = 1 control: int exp(-2 l^2) dl = {ctrl.value:.12f} "
      f"(sqrt(pi/2) = {math.sqrt(math.pi / 2):.12f}) -- finite, as it must be")
