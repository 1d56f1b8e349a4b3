"""
Sum-of-sincs sampling kernel acting as a Fourier-series coefficient
selector, and the real trigonometric polynomials it produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import FriSignal, fri_fsc

__all__ = ["SosKernel", "TrigPolynomial", "make_sos_kernel",
           "filter_fri", "integrate_trig", "sup_bound"]


@dataclass(frozen=True)
class SosKernel:
    """Flat-or-weighted passband on indices -k_max..k_max of a T-periodic input."""

    k_max: int
    period: float
    gains: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.k_max, self.k_max + 1)

    @property
    def size(self) -> int:
        return 2 * self.k_max + 1

    @property
    def g_sup(self) -> float:
        """||g||_inf of the periodic impulse response (1/T) sum_k b_k e^{jk w0 t}."""
        return float(np.sum(np.abs(self.gains)) / self.period)


def make_sos_kernel(k_max: int, period: float, gains=None) -> SosKernel:
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    if not period > 0:
        raise ValueError("period must be positive")
    size = 2 * k_max + 1
    if gains is None:
        g = np.ones(size, dtype=complex)
    else:
        g = np.array(gains, dtype=complex).ravel()
        if g.size != size:
            raise ValueError(f"expected {size} gains, got {g.size}")
        if np.any(g == 0):
            raise ValueError("passband gains must be nonzero")
        if not np.allclose(g, np.conj(g[::-1])):
            raise ValueError("gains must be conjugate symmetric for a real kernel")
    g.flags.writeable = False
    return SosKernel(int(k_max), float(period), g)


@dataclass(frozen=True)
class TrigPolynomial:
    """Real T-periodic signal y(t) = sum_k coeffs[k] exp(j k w0 t), k = -k_max..k_max."""

    period: float
    coeffs: np.ndarray

    @property
    def k_max(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.k_max, self.k_max + 1)

    @property
    def omega0(self) -> float:
        return 2 * np.pi / self.period

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.k_max:
            return 0j
        return complex(self.coeffs[k + self.k_max])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        E = np.exp(1j * self.omega0 * np.outer(np.atleast_1d(t_arr), self.indices))
        out = (E @ self.coeffs).real
        return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)

    @classmethod
    def from_coeffs(cls, period, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise ValueError("coefficient vector must have odd length")
        if not np.allclose(c, np.conj(c[::-1]), rtol=1e-12, atol=1e-14):
            raise ValueError("coefficients must be conjugate symmetric")
        c.flags.writeable = False
        return cls(float(period), c)


def filter_fri(signal: FriSignal, kernel: SosKernel) -> TrigPolynomial:
    """Y[k] = b_k X[k] on the kernel passband, zero elsewhere."""
    if not np.isclose(signal.period, kernel.period, rtol=1e-12, atol=0):
        raise ValueError(
            f"period mismatch: signal {signal.period}, kernel {kernel.period}")
    Y = kernel.gains * fri_fsc(signal, kernel.indices)
    # exact symmetry; fri_fsc rounding can break it in the last bit
    Y = 0.5 * (Y + np.conj(Y[::-1]))
    Y.flags.writeable = False
    return TrigPolynomial(signal.period, Y)


def _integral_weights(k, omega0, t_a, t_b):
    """Closed-form integral of exp(j k w0 s) over [t_a, t_b], broadcast over k and t."""
    t_a = np.asarray(t_a, dtype=float)[..., None]
    t_b = np.asarray(t_b, dtype=float)[..., None]
    k = np.asarray(k)
    w = k * omega0
    nz = k != 0
    out = np.empty(np.broadcast_shapes(t_a.shape, k.shape), dtype=complex)
    out[..., ~nz] = (t_b - t_a)
    wn = w[nz]
    # (e^{jwb} - e^{jwa}) / (jw) = e^{jw(a+b)/2} * 2 sin(w(b-a)/2) / w
    mid = 0.5 * (t_a + t_b)
    half = 0.5 * (t_b - t_a)
    out[..., nz] = np.exp(1j * wn * mid) * (2.0 * np.sin(wn * half) / wn)
    return out


def integrate_trig(y: TrigPolynomial, t_a, t_b):
    """Exact integral of y over [t_a, t_b]; array arguments are broadcast."""
    ta = np.asarray(t_a, dtype=float)
    tb = np.asarray(t_b, dtype=float)
    if np.any(ta > tb):
        raise ValueError("t_a must not exceed t_b")
    W = _integral_weights(y.indices, y.omega0, ta, tb)
    val = (W @ y.coeffs).real
    return float(val) if val.ndim == 0 else val


def sup_bound(y: TrigPolynomial) -> float:
    """Certified upper bound sum_k |Y[k]| on max_t |y(t)|."""
    return float(np.sum(np.abs(y.coeffs)))
