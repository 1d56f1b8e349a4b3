"""
K-level uniform mid-rise quantizers for sample amplitudes and firing-time
differences, plus the step-size tables behind the two monotonicity results
(step shrinks with pulse count L and with band limit).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .encoding import FiringRecord, TemParams, interval_bounds
from .signals import AmplitudeBound, bl_amplitude_bound, fri_amplitude_bound

__all__ = ["UniformQuantizer", "make_quantizer", "make_amplitude_quantizer",
           "make_time_quantizer", "quantize", "quantize_with_flag",
           "quantize_firing_record", "step_size_vs_pulses",
           "step_size_vs_bandwidth", "time_step_size", "amplitude_step_size"]


@dataclass(frozen=True)
class UniformQuantizer:
    """Mid-rise quantizer on [lo, hi] with K levels lo + (i + 1/2) step."""

    lo: float
    hi: float
    levels: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("quantizer needs lo < hi")
        if self.levels < 2:
            raise ValueError("quantizer needs at least 2 levels")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.levels

    @property
    def alphabet(self) -> np.ndarray:
        return self.lo + (np.arange(self.levels) + 0.5) * self.step

    @property
    def bits(self) -> float:
        return float(np.log2(self.levels))


def make_quantizer(lo: float, hi: float, bits: int) -> UniformQuantizer:
    if bits < 1:
        raise ValueError("bits must be >= 1")
    return UniformQuantizer(float(lo), float(hi), 2 ** int(bits))


def make_amplitude_quantizer(c, bits: int) -> UniformQuantizer:
    """Range [-c, c], step 2c / K."""
    cv = c.value if isinstance(c, AmplitudeBound) else float(c)
    return make_quantizer(-cv, cv, bits)


def make_time_quantizer(params: TemParams, c, bits: int) -> UniformQuantizer:
    """Range [kd / (b + c), kd / (b - c)] of the firing-time differences."""
    lo, hi = interval_bounds(params, c)
    return make_quantizer(lo, hi, bits)


def quantize_with_flag(q: UniformQuantizer, x):
    """Quantize and report whether any input fell outside [lo, hi]."""
    x = np.asarray(x, dtype=float)
    saturated = bool(np.any((x < q.lo) | (x > q.hi)))
    idx = np.floor((np.clip(x, q.lo, q.hi) - q.lo) / q.step)
    idx = np.clip(idx, 0, q.levels - 1)
    out = q.lo + (idx + 0.5) * q.step
    return (float(out) if out.ndim == 0 else out), saturated


def quantize(q: UniformQuantizer, x):
    return quantize_with_flag(q, x)[0]


def quantize_firing_record(rec: FiringRecord, q: UniformQuantizer) -> FiringRecord:
    """Quantize the intervals T_n and rebuild instants by cumulative sum."""
    Tq, sat = quantize_with_flag(q, rec.intervals)
    times = rec.start_time + np.cumsum(np.atleast_1d(Tq))
    return replace(rec, times=times, quantized=True,
                   saturated=rec.saturated or sat)


def time_step_size(kd: float, b: float, c: float, K: int) -> float:
    return kd * 2 * c / ((b + c) * (b - c) * K)


def amplitude_step_size(c: float, K: int) -> float:
    return 2 * c / K


def step_size_vs_pulses(L_values, alpha, kappa, delta, a_max=1.0, g_sup=1.0,
                        h_l1=1.0, bits=8):
    """Rows (L, IF-TEM time step, classical amplitude step) with b = alpha c.

    ``g_sup`` may be a number or a callable of L (e.g. a kernel whose
    passband widens with L).
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    K = 2 ** int(bits)
    rows = []
    for L in L_values:
        gs = g_sup(L) if callable(g_sup) else g_sup
        c = fri_amplitude_bound(L, a_max, gs, h_l1).value
        rows.append((int(L), time_step_size(kappa * delta, alpha * c, c, K),
                     amplitude_step_size(c, K)))
    return rows


def step_size_vs_bandwidth(omega_hz_values, alpha, kappa, delta, energy=1.6,
                           bits=8, fixed_c=None):
    """Rows (band limit in Hz, IF-TEM time step) with b = alpha c.

    ``fixed_c`` pins the amplitude bound (the energy scaled as 1 / Omega),
    which makes the table flat.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    K = 2 ** int(bits)
    rows = []
    for f in omega_hz_values:
        c = fixed_c if fixed_c is not None else bl_amplitude_bound(energy, f).value
        rows.append((float(f), time_step_size(kappa * delta, alpha * c, c, K)))
    return rows
