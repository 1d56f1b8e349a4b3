"""
Integrate-and-fire time encoding, classical uniform sampling and the
perfect-recovery feasibility checks.

The encoder never discretises the input: firing instants are roots of the
closed-form running integral, bracketed by the interval bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .kernel import TrigPolynomial, integrate_trig, sup_bound
from .signals import AmplitudeBound, BlSignal, bl_amplitude_bound, integrate_bl

__all__ = ["TemParams", "FiringRecord", "encode_iftem", "sample_classical",
           "interval_bounds", "feasible_fri", "feasible_bl",
           "integrate_input", "input_bound", "FeasibilityError"]


class FeasibilityError(ValueError):
    """TEM parameters cannot encode (or guarantee recovery of) the input."""


@dataclass(frozen=True)
class TemParams:
    """IF-TEM bias b, integrator scale kappa and threshold delta."""

    bias: float
    kappa: float
    delta: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def kd(self) -> float:
        return self.kappa * self.delta


@dataclass(frozen=True)
class FiringRecord:
    """Firing instants t_1 < t_2 < ... and the encoder that produced them.

    ``intervals`` are measured from ``start_time``, so the first interval is
    t_1 - t_0 and there are exactly as many intervals as firings.
    """

    times: np.ndarray
    params: TemParams
    start_time: float = 0.0
    quantized: bool = field(default=False)
    saturated: bool = field(default=False)

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate(([self.start_time], self.times))

    @property
    def intervals(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def measurements(self) -> np.ndarray:
        """y_n = -b T_n + kappa delta, the integral of y over each interval."""
        return -self.params.bias * self.intervals + self.params.kd

    def __len__(self):
        return len(self.times)


def integrate_input(y, t_a, t_b):
    """Exact integral of a trig polynomial or BL sinc expansion."""
    if isinstance(y, TrigPolynomial):
        return integrate_trig(y, t_a, t_b)
    if isinstance(y, BlSignal):
        return integrate_bl(y, t_a, t_b)
    raise TypeError(f"cannot integrate {type(y).__name__}")


def input_bound(y) -> float:
    """Certified amplitude bound of an encoder input."""
    if isinstance(y, TrigPolynomial):
        return sup_bound(y)
    if isinstance(y, BlSignal):
        if np.isfinite(y.amplitude_bound):
            return y.amplitude_bound
        return bl_amplitude_bound(y.energy_bound, y.band_limit_hz).value
    raise TypeError(f"no amplitude bound for {type(y).__name__}")


def _as_value(c) -> float:
    return c.value if isinstance(c, AmplitudeBound) else float(c)


def interval_bounds(params: TemParams, c) -> tuple[float, float]:
    """(kappa delta / (b + c), kappa delta / (b - c))."""
    cv = _as_value(c)
    if not params.bias > cv:
        raise FeasibilityError(f"bias {params.bias} must exceed bound {cv}")
    return params.kd / (params.bias + cv), params.kd / (params.bias - cv)


def encode_iftem(y, params: TemParams, t0: float = 0.0, t_end: float = 1.0,
                 c=None, xtol: float = 1e-15) -> FiringRecord:
    """Encode ``y`` with an ideal integrate-and-fire TEM on (t0, t_end].

    Each firing t_{n+1} solves int_{t_n}^{t} (b + y) ds = kappa delta; the root
    is isolated on [t_n + dt_min, t_n + dt_max] and refined by Brent's method
    (bracketing, derivative-free) to ``xtol`` seconds.

    Parameters
    ----------
    y : TrigPolynomial or BlSignal
        Encoder input with a closed-form integral.
    params : TemParams
    t0, t_end : float
        Integration origin (integrator empty at t0) and horizon end.
    c : float or AmplitudeBound, optional
        Amplitude bound of ``y``; defaults to the certified bound of the input.
    """
    if not t0 < t_end:
        raise ValueError("t0 must precede t_end")
    cv = input_bound(y) if c is None else _as_value(c)
    if not params.bias > cv:
        raise FeasibilityError(
            f"bias {params.bias} does not exceed input bound {cv}")
    b, kd = params.bias, params.kd
    dt_min = kd / (b + cv)
    dt_max = kd / (b - cv) if cv > 0 else dt_min

    times = []
    tn = float(t0)
    while tn + dt_min <= t_end:
        def F(t, tn=tn):
            return b * (t - tn) + integrate_input(y, tn, t) - kd

        lo, hi = tn + dt_min, min(tn + dt_max, t_end)
        f_lo = F(lo)
        if f_lo >= 0 or dt_max - dt_min <= xtol:
            t_next = lo
        else:
            f_hi = F(hi)
            if f_hi < 0:
                break  # next firing falls beyond t_end
            t_next = hi if f_hi == 0 else brentq(F, lo, hi, xtol=xtol,
                                                 rtol=4 * np.finfo(float).eps)
        times.append(t_next)
        tn = t_next
    return FiringRecord(np.array(times, dtype=float), params, float(t0))


def sample_classical(y, ts: float, n: int, t0: float = 0.0) -> np.ndarray:
    """Uniform samples y(t0 + m ts), m = 0..n-1."""
    if not ts > 0:
        raise ValueError("ts must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.asarray(y(t0 + ts * np.arange(n)), dtype=float)


def feasible_fri(params: TemParams, c, L: int, T: float) -> bool:
    """Firing-rate condition 1/dt_max >= (2L + 2) / T (inclusive)."""
    cv = _as_value(c)
    if not params.bias > cv:
        raise FeasibilityError(f"bias {params.bias} must exceed bound {cv}")
    return (params.bias - cv) * T >= (2 * L + 2) * params.kd


def feasible_bl(params: TemParams, c, band_limit_hz: float) -> bool:
    """dt_max < pi / Omega with Omega = 2 pi band_limit_hz (strict)."""
    cv = _as_value(c)
    if not params.bias > cv:
        raise FeasibilityError(f"bias {params.bias} must exceed bound {cv}")
    # kd / (b - c) < 1 / (2 f)  <=>  2 f kd < b - c
    return 2.0 * band_limit_hz * params.kd < params.bias - cv
