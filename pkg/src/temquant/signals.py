"""
Test signal models: periodic pulse streams (FRI) and finite sinc
expansions (bandlimited), with their Fourier-series coefficients and
amplitude bounds.

Band limits are carried in Hz throughout and converted to rad/s only
where a formula needs the angular value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import sici

__all__ = [
    "PulseShape", "FriSignal", "BlSignal", "AmplitudeBound",
    "dirac", "gaussian_pulse",
    "make_fri_signal", "fri_fsc", "eval_fri",
    "make_bl_signal", "eval_bl", "integrate_bl",
    "fri_amplitude_bound", "bl_amplitude_bound",
    "AmplitudeBoundError",
]


class AmplitudeBoundError(ValueError):
    """Raised when a drawn signal exceeds its certified amplitude bound."""


@dataclass(frozen=True)
class PulseShape:
    """Pulse h(t) described by its continuous-time Fourier transform.

    Parameters
    ----------
    kind : str
        ``"dirac"`` or ``"parametric"``.
    spectrum : callable
        Vectorised map from angular frequency (rad/s) to H(omega).
    l1_norm : float
        ||h||_1; 1 for a Dirac by convention.
    """

    kind: str
    spectrum: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    l1_norm: float = 1.0

    def __post_init__(self):
        if self.kind not in ("dirac", "parametric"):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if not self.l1_norm > 0:
            raise ValueError("pulse l1_norm must be positive")
        if not np.isfinite(self.spectrum(np.zeros(1))).all():
            raise ValueError("pulse spectrum must be finite at omega=0")


def _dirac_spectrum(w):
    return np.ones_like(np.asarray(w, dtype=float), dtype=complex)


def dirac() -> PulseShape:
    return PulseShape("dirac", _dirac_spectrum, 1.0)


def gaussian_pulse(width: float) -> PulseShape:
    """Unit-area Gaussian pulse exp(-t^2 / (2 width^2)) / (sqrt(2 pi) width).

    Its spectrum exp(-(omega width)^2 / 2) has no zeros, so every Fourier
    index can be demodulated.
    """
    if not width > 0:
        raise ValueError("width must be positive")

    def spectrum(w):
        w = np.asarray(w, dtype=float)
        return np.exp(-0.5 * (w * width) ** 2).astype(complex)

    return PulseShape("parametric", spectrum, 1.0)


@dataclass(frozen=True)
class FriSignal:
    """T-periodic stream of L weighted, delayed copies of a pulse."""

    period: float
    amplitudes: np.ndarray
    delays: np.ndarray
    pulse: PulseShape

    @property
    def L(self) -> int:
        return len(self.amplitudes)

    @property
    def omega0(self) -> float:
        return 2 * np.pi / self.period


@dataclass(frozen=True)
class BlSignal:
    """x(t) = sum_n coeffs[n] sinc((t - n ts) / ts), n = -N..N."""

    coeffs: np.ndarray
    band_limit_hz: float
    energy_bound: float
    amplitude_bound: float = np.inf

    @property
    def ts(self) -> float:
        return 1.0 / (2.0 * self.band_limit_hz)

    @property
    def N(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def centers(self) -> np.ndarray:
        return np.arange(-self.N, len(self.coeffs) - self.N) * self.ts

    def __call__(self, t):
        return eval_bl(self, t)


@dataclass(frozen=True)
class AmplitudeBound:
    """Certified bound c on |y(t)|, tagged with how it was obtained."""

    value: float
    provenance: str = "user_supplied"

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("amplitude bound must be positive")
        if self.provenance not in ("fri", "bl_energy", "user_supplied"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __float__(self):
        return float(self.value)


def make_fri_signal(amplitudes: Sequence[float], delays: Sequence[float],
                    period: float, pulse: PulseShape | None = None) -> FriSignal:
    """Validate and build a periodic FRI signal.

    Delays must lie in (0, period] and be pairwise distinct.
    """
    if pulse is None:
        pulse = dirac()
    if not period > 0:
        raise ValueError("period must be positive")
    a = np.array(amplitudes, dtype=float).ravel()
    tau = np.array(delays, dtype=float).ravel()
    if len(a) != len(tau):
        raise ValueError(
            f"length mismatch: {len(a)} amplitudes vs {len(tau)} delays")
    if len(a) < 1:
        raise ValueError("at least one pulse is required")
    if np.any(tau <= 0) or np.any(tau > period):
        raise ValueError(f"delays must lie in (0, {period}]")
    if len(np.unique(tau)) != len(tau):
        raise ValueError("duplicate delays")
    a.flags.writeable = False
    tau.flags.writeable = False
    return FriSignal(float(period), a, tau, pulse)


def fri_fsc(signal: FriSignal, k):
    """Fourier-series coefficients X[k] of an FRI signal.

    ``k`` may be a scalar or an integer array; the result has the same shape.
    """
    k_arr = np.asarray(k)
    kk = np.atleast_1d(k_arr).astype(float)
    w = kk * signal.omega0
    phases = np.exp(-1j * np.outer(w, signal.delays))
    X = signal.pulse.spectrum(w) * (phases @ signal.amplitudes) / signal.period
    if k_arr.ndim == 0:
        return complex(X[0])
    return X.reshape(k_arr.shape)


def eval_fri(signal: FriSignal, t, truncation: int):
    """Partial Fourier sum of x(t) over |k| <= truncation (plotting only)."""
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    k = np.arange(-truncation, truncation + 1)
    X = fri_fsc(signal, k)
    vals = np.exp(1j * signal.omega0 * np.outer(np.atleast_1d(t_arr), k)) @ X
    out = vals.real
    return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def eval_bl(signal: BlSignal, t):
    """Evaluate the sinc expansion; ``np.sinc`` is the normalised sinc."""
    t_arr = np.asarray(t, dtype=float)
    u = (np.atleast_1d(t_arr)[:, None] - signal.centers[None, :]) / signal.ts
    out = np.sinc(u) @ signal.coeffs
    return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def integrate_bl(signal: BlSignal, t_a, t_b):
    """Exact integral of the sinc expansion over [t_a, t_b] via the sine integral."""
    ta = np.asarray(t_a, dtype=float)
    tb = np.asarray(t_b, dtype=float)
    scale = np.pi / signal.ts
    si_b = sici(scale * (tb[..., None] - signal.centers))[0]
    si_a = sici(scale * (ta[..., None] - signal.centers))[0]
    val = ((si_b - si_a) @ signal.coeffs) * signal.ts / np.pi
    return float(val) if val.ndim == 0 else val


def _bl_peak(coeffs, band_limit_hz, points_per_ts=64, pad=4):
    ts = 1.0 / (2.0 * band_limit_hz)
    N = (len(coeffs) - 1) // 2
    t = np.linspace(-(N + pad) * ts, (N + pad) * ts,
                    2 * (N + pad) * points_per_ts + 1)
    sig = BlSignal(np.asarray(coeffs, dtype=float), band_limit_hz, 1.0)
    return float(np.max(np.abs(eval_bl(sig, t))))


def make_bl_signal(coeffs: Sequence[float], band_limit_hz: float,
                   energy_bound: float, amplitude_bound: float | None = None
                   ) -> BlSignal:
    """Build a bandlimited sinc expansion centred on t = 0.

    Raises `AmplitudeBoundError` when the peak on a dense grid exceeds the
    amplitude bound, by default ``bl_amplitude_bound(energy_bound,
    band_limit_hz)``; callers drawing random coefficients redraw on this
    error.
    """
    c = np.array(coeffs, dtype=float).ravel()
    if c.size == 0:
        raise ValueError("coeffs must be nonempty")
    if not band_limit_hz > 0:
        raise ValueError("band_limit_hz must be positive")
    if not energy_bound > 0:
        raise ValueError("energy_bound must be positive")
    if c.size % 2 == 0:
        raise ValueError("coeffs must have odd length 2N+1")
    if amplitude_bound is None:
        bound = bl_amplitude_bound(energy_bound, band_limit_hz).value
    elif amplitude_bound > 0:
        bound = float(amplitude_bound)
    else:
        raise ValueError("amplitude_bound must be positive")
    peak = _bl_peak(c, band_limit_hz)
    if peak > bound:
        raise AmplitudeBoundError(
            f"signal peak {peak:.4g} exceeds amplitude bound {bound:.4g}")
    c.flags.writeable = False
    return BlSignal(c, float(band_limit_hz), float(energy_bound), bound)


def fri_amplitude_bound(L: int, a_max: float, g_sup: float,
                        h_l1: float) -> AmplitudeBound:
    """c = L * a_max * ||g||_inf * ||h||_1."""
    for name, v in (("L", L), ("a_max", a_max), ("g_sup", g_sup),
                    ("h_l1", h_l1)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    return AmplitudeBound(float(L * a_max * g_sup * h_l1), "fri")


def bl_amplitude_bound(energy: float, band_limit_hz: float) -> AmplitudeBound:
    """c = sqrt(E * Omega / pi) with Omega = 2 pi band_limit_hz in rad/s."""
    if not energy > 0:
        raise ValueError("energy must be positive")
    if not band_limit_hz > 0:
        raise ValueError("band_limit_hz must be positive")
    omega = 2 * np.pi * band_limit_hz
    return AmplitudeBound(float(np.sqrt(energy * omega / np.pi)), "bl_energy")
