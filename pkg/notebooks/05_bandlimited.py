"""
Bandlimited inputs
==================

Firing-interval spread versus band limit, and recovery from firing times.
"""

import numpy as np

import temquant as tq
from temquant.experiments import (ExperimentConfig, mse_db,
                                  run_bl_mse_experiment, run_bl_range_experiment)

for conv in ("hz_literal", "angular"):
    rows = run_bl_range_experiment(ExperimentConfig(
        signal_class="bl", trials=30, seed=1, bound_convention=conv))
    print(f"\nbound convention {conv}")
    for r in rows:
        print(f"  {r['omega_hz']:4g} Hz  c={r['c']:.3f}  range {r['tn_range']:.3e} s "
              f"(bounds width {r['dt_max'] - r['dt_min']:.3e})")

# perfect recovery from unquantized firings
rng = np.random.default_rng(3)
s = tq.make_bl_signal(rng.uniform(-1, 1, 7) * 0.4, 5.0, 1.6)
p = tq.TemParams(6 * s.amplitude_bound, 0.4, 0.075)
rec = tq.encode_iftem(s, p, -0.6, 0.6)
x = tq.reconstruct_bl_from_times(rec, 5.0)
print(f"\n{len(rec)} firings, unquantized MSE {mse_db(s, x, -0.5, 0.5):.1f} dB")

_, curves = run_bl_mse_experiment(ExperimentConfig(
    signal_class="bl", trials=3, seed=1, omega_sweep_hz=(5.0,),
    bits_sweep=(4, 8, 12)))
for r in curves:
    print(f"  {r['key'][1]:2d} bits: classical {r['classical_mean']:7.1f} dB, "
          f"IF-TEM {r['iftem_mean']:7.1f} dB")
