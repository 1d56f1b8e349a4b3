"""
Quantization step sizes
=======================

With b = alpha c the time step falls as 1/c while the amplitude step grows
as c. The tables below show both trends.
"""

import temquant as tq

print(" L   time step    amplitude step")
for L, d_if, d_cl in tq.step_size_vs_pulses(range(1, 17), alpha=10, kappa=0.5,
                                            delta=30, bits=8):
    print(f"{L:2d}  {d_if:.4e}   {d_cl:.4e}")

print("\n f (Hz)  time step")
for f, d in tq.step_size_vs_bandwidth([5, 10, 30, 50], alpha=6, kappa=0.4,
                                      delta=0.075, energy=1.6, bits=8):
    print(f"{f:6g}  {d:.4e}")

# Amplitude error per interval: the measurement is b T_n, so a time step
# dt costs b dt / 2 in integral units, or about c / K once divided by the
# interval length. The classical quantizer also gives c / K.
c, alpha, kd, K = 6.0, 10.0, 15.0, 256
b = alpha * c
dt = tq.time_step_size(kd, b, c, K)
print(f"\nequivalent amplitude error: IF-TEM {b * dt / 2 / (kd / b):.4f}, "
      f"classical {tq.amplitude_step_size(c, K) / 2:.4f}")
