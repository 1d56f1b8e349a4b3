"""
Integrate-and-fire encoding of a filtered pulse stream
======================================================

Three Diracs per second pass through a sum-of-sincs kernel; the resulting
trigonometric polynomial drives an IF-TEM.
"""

import numpy as np

import temquant as tq

s = tq.make_fri_signal([0.9, -0.4, 0.6], [0.15, 0.5, 0.8], period=1.0)
kernel = tq.make_sos_kernel(4, 1.0)
y = tq.filter_fri(s, kernel)

c = tq.fri_amplitude_bound(s.L, 1.0, kernel.g_sup, 1.0)
params = tq.TemParams(bias=10 * c.value, kappa=0.5, delta=30.0)
rec = tq.encode_iftem(y, params, 0.0, 1.0, c=c)
print(f"c = {c.value:g}, b = {params.bias:g}, {len(rec)} firings in one period")

# every interval sits inside the a-priori bounds
lo, hi = tq.interval_bounds(params, c)
print(f"T_n in [{rec.intervals.min():.6f}, {rec.intervals.max():.6f}] "
      f"within [{lo:.6f}, {hi:.6f}]")

# the interval integral of y is an affine function of the interval length
e = rec.edges
err = np.abs(tq.integrate_trig(y, e[:-1], e[1:]) - rec.measurements).max()
print(f"max measurement identity error {err:.2e}")

# enough firings for 2L + 2 coefficients?
print("firing-rate condition holds:", tq.feasible_fri(params, c, s.L, 1.0))
