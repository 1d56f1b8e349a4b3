"""
Pulse parameters from firing times
==================================

Fourier coefficients come from a least-squares fit to the interval
integrals; delays then come from OMP on a 0.05 s grid or from the
annihilating filter.
"""

import numpy as np

import temquant as tq
from temquant.reconstruction import grid_coherence, omp_safe_halfwidth

s = tq.make_fri_signal([0.7, -0.5, 0.35], [0.05, 0.1, 0.15], 1.0)

# Greedy OMP needs a dictionary with low coherence. With only 2L + 1
# coefficients neighbouring grid atoms are nearly parallel.
for K in (3, 4, omp_safe_halfwidth(3, 1.0, 0.05)):
    print(f"|k| <= {K}: grid coherence {grid_coherence(K, 1.0, 0.05):.3f}, "
          f"exact-recovery threshold {1 / 5:.3f}")

for K in (3, 8):
    kernel = tq.make_sos_kernel(K, 1.0)
    y = tq.filter_fri(s, kernel)
    c = tq.sup_bound(y)
    rec = tq.encode_iftem(y, tq.TemParams(10 * c, 0.5, 0.5 * c / 4), 0.0, 1.0, c=c)
    fsc = tq.fsc_from_iftem(rec, kernel)
    omp = tq.estimate_fri_omp(fsc, 3)
    af = tq.estimate_fri_af(fsc, 3)
    print(f"\n|k| <= {K}, {len(rec)} firings")
    print("  OMP delays", np.round(omp.delays, 6), "amplitudes", np.round(omp.amplitudes, 6))
    print("  AF  delays", np.round(af.delays, 6), "amplitudes", np.round(af.amplitudes, 6))

# the annihilating filter needs no grid
s_off = tq.make_fri_signal([0.7, -0.4], [0.213, 0.787], 1.0)
k = np.arange(-2, 3)
est = tq.estimate_fri_af(tq.FscEstimate(k, tq.fri_fsc(s_off, k), 1.0), 2)
print("\noff-grid delays", est.delays)
