"""
Recovery from (possibly quantized) measurements.

FRI path: Fourier-series coefficients from firing intervals or uniform
samples by least squares, then pulse parameters by orthogonal matching
pursuit on a delay grid or by the annihilating filter.

BL path: sinc-basis least squares on the firing-interval integrals, or
plain sinc interpolation of uniform samples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .encoding import FiringRecord
from .kernel import SosKernel, _integral_weights
from .signals import PulseShape, dirac

__all__ = ["FscEstimate", "FriEstimate", "IllConditionedWarning",
           "fsc_from_iftem", "fsc_from_classical",
           "estimate_fri_omp", "estimate_fri_af",
           "BlReconstruction", "reconstruct_bl_from_times",
           "reconstruct_bl_classical", "omp", "annihilating_roots",
           "SincInterpolant", "grid_coherence", "omp_safe_halfwidth"]

PINV_RCOND = 1e-8
COND_WARN = 1e12


class IllConditionedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class FscEstimate:
    """Estimated X[k] on ``indices`` with least-squares diagnostics."""

    indices: np.ndarray
    coefficients: np.ndarray
    period: float
    residual: float = 0.0
    condition: float = 1.0
    ill_conditioned: bool = False

    def __getitem__(self, k):
        return self.coefficients[int(k) - int(self.indices[0])]


@dataclass(frozen=True)
class FriEstimate:
    amplitudes: np.ndarray
    delays: np.ndarray
    method: str


def _symmetrize(c):
    # projection onto conjugate-symmetric vectors (real signals)
    return 0.5 * (c + np.conj(c[::-1]))


def _solve_fsc(A, y, kernel, period):
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
    keep = s > PINV_RCOND * s[0]
    coef = vh[keep].conj().T @ ((u[:, keep].conj().T @ y) / s[keep])
    residual = float(np.linalg.norm(A @ coef - y))
    ill = cond > COND_WARN
    if ill:
        warnings.warn(f"FSC system condition number {cond:.3g} exceeds "
                      f"{COND_WARN:g}", IllConditionedWarning, stacklevel=3)
    coef = _symmetrize(coef) / kernel.gains
    return FscEstimate(kernel.indices, coef, period, residual, cond, ill)


def fsc_from_iftem(rec: FiringRecord, kernel: SosKernel) -> FscEstimate:
    """Least-squares FSCs from the interval integrals y_n = -b T_n + kappa delta.

    Row n of the system holds the exact integrals of exp(j k w0 s) over
    [t_n, t_{n+1}], with t_0 the record's start time.
    """
    edges = rec.edges
    N = len(edges) - 1
    if N < kernel.size:
        raise ValueError(
            f"insufficient firings: {N} intervals for {kernel.size} coefficients")
    w0 = 2 * np.pi / kernel.period
    A = _integral_weights(kernel.indices, w0, edges[:-1], edges[1:])
    return _solve_fsc(A, rec.measurements.astype(complex), kernel, kernel.period)


def fsc_from_classical(samples, kernel: SosKernel, ts: float,
                       t0: float = 0.0) -> FscEstimate:
    """Least-squares FSCs from uniform samples y(t0 + m ts)."""
    samples = np.asarray(samples, dtype=float)
    N = samples.size
    if N < kernel.size:
        raise ValueError(
            f"insufficient samples: {N} for {kernel.size} coefficients")
    if N * ts > kernel.period * (1 + 1e-12):
        raise ValueError("samples must span at most one period")
    w0 = 2 * np.pi / kernel.period
    t = t0 + ts * np.arange(N)
    A = np.exp(1j * w0 * np.outer(t, kernel.indices))
    return _solve_fsc(A, samples.astype(complex), kernel, kernel.period)


def _demodulate(fsc: FscEstimate, pulse: PulseShape):
    w = fsc.indices * (2 * np.pi / fsc.period)
    H = pulse.spectrum(w.astype(float))
    if np.any(np.abs(H) == 0):
        raise ValueError("pulse spectrum vanishes on the kernel passband")
    return fsc.period * fsc.coefficients / H


def _real_lstsq(D, s):
    """Least squares with real unknowns for a complex system."""
    Dr = np.vstack([D.real, D.imag])
    sr = np.concatenate([s.real, s.imag])
    return np.linalg.lstsq(Dr, sr, rcond=None)[0]


def omp(D, s, n_atoms):
    """Orthogonal matching pursuit with real coefficients.

    Returns (support indices in selection order, coefficients).
    """
    norms = np.linalg.norm(D, axis=0)
    support = []
    r = s.copy()
    x = np.zeros(0)
    for _ in range(n_atoms):
        corr = np.abs(D.conj().T @ r) / norms
        corr[support] = -np.inf
        support.append(int(np.argmax(corr)))
        x = _real_lstsq(D[:, support], s)
        r = s - D[:, support] @ x
    return support, x


def estimate_fri_omp(fsc: FscEstimate, L: int, pulse: PulseShape | None = None,
                     T: float | None = None, grid_step: float = 0.05) -> FriEstimate:
    """Pick L delays from the grid {grid_step, 2 grid_step, ..., T} by OMP."""
    pulse = dirac() if pulse is None else pulse
    T = fsc.period if T is None else T
    if L < 1:
        raise ValueError("L must be >= 1")
    n_grid = int(round(T / grid_step))
    if n_grid < 1 or not np.isclose(n_grid * grid_step, T, rtol=1e-9, atol=0):
        raise ValueError(f"grid_step {grid_step} does not divide period {T}")
    if n_grid < L:
        raise ValueError("delay grid has fewer atoms than pulses")
    if len(fsc.indices) < 2 * L:
        raise ValueError("need at least 2L Fourier coefficients")
    s = _demodulate(fsc, pulse)
    grid = grid_step * np.arange(1, n_grid + 1)
    D = np.exp(-1j * (2 * np.pi / T) * np.outer(fsc.indices, grid))
    support, a = omp(D, s, L)
    order = np.argsort(grid[support])
    return FriEstimate(np.asarray(a)[order], grid[support][order], "omp")


def grid_coherence(K: int, T: float, grid_step: float) -> float:
    """Mutual coherence of the delay-grid dictionary on indices -K..K.

    Atoms differ only by a delay shift, so the coherence is the largest
    normalised Dirichlet-kernel value over nonzero grid offsets.
    """
    n_grid = int(round(T / grid_step))
    k = np.arange(-K, K + 1)
    m = np.arange(1, n_grid)
    G = np.exp(-2j * np.pi * np.outer(m, k) / n_grid).sum(axis=1)
    return float(np.max(np.abs(G)) / k.size) if m.size else 0.0


def omp_safe_halfwidth(L: int, T: float, grid_step: float,
                       k_limit: int = 1000) -> int:
    """Smallest K >= L with coherence < 1 / (2L - 1).

    Under that condition OMP selects a correct atom at every step for any
    L-sparse on-grid input (Tropp's exact-recovery bound).
    """
    for K in range(L, k_limit + 1):
        if grid_coherence(K, T, grid_step) < 1.0 / (2 * L - 1):
            return K
    raise ValueError(f"no half-width up to {k_limit} certifies OMP for L={L}")


def _annihilating_matrix(s, L):
    # row i: [s[i], s[i-1], ..., s[i-L]]
    return np.array([s[i - np.arange(L + 1)] for i in range(L, len(s))])


def estimate_fri_af(fsc: FscEstimate, L: int, pulse: PulseShape | None = None,
                    T: float | None = None, rank_tol: float = 1e-10) -> FriEstimate:
    """Annihilating-filter (Prony) delay estimate plus real LS amplitudes."""
    pulse = dirac() if pulse is None else pulse
    T = fsc.period if T is None else T
    M = len(fsc.indices)
    if M < 2 * L:
        raise ValueError("need at least 2L contiguous Fourier coefficients")
    s = _demodulate(fsc, pulse)
    S = _annihilating_matrix(s, L)
    _, sv, vh = np.linalg.svd(S)
    if sv[L - 1] <= rank_tol * sv[0]:
        raise ValueError("annihilating system has rank below L; "
                         "fewer than L distinct pulses")
    h = vh[-1].conj()
    u = np.roots(h)
    tau = np.mod(-T * np.angle(u) / (2 * np.pi), T)
    tau[tau <= 0] += T
    tau = np.sort(tau)
    V = np.exp(-1j * (2 * np.pi / T) * np.outer(fsc.indices, tau))
    a = _real_lstsq(V, s)
    return FriEstimate(a, tau, "annihilating_filter")


def annihilating_roots(fsc: FscEstimate, L: int, pulse: PulseShape | None = None):
    """Roots of the annihilating polynomial; on the unit circle for exact data."""
    pulse = dirac() if pulse is None else pulse
    h = np.linalg.svd(_annihilating_matrix(_demodulate(fsc, pulse), L))[2][-1].conj()
    return np.roots(h)


def _sinc_omega(u, omega):
    return np.sinc(omega * u / np.pi)


@dataclass(frozen=True)
class BlReconstruction:
    """x(t) = sum_m weights[m] sin(W (t - centers[m])) / (W (t - centers[m]))."""

    centers: np.ndarray
    weights: np.ndarray
    omega: float
    rank: int = 0

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        G = _sinc_omega(np.atleast_1d(t_arr)[:, None] - self.centers[None, :],
                        self.omega)
        out = G @ self.weights
        return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def _sinc_interval_integrals(edges, centers, omega):
    """B[n, m] = int_{edges[n]}^{edges[n+1]} sinc_W(t - centers[m]) dt, via Si."""
    si = sici(omega * (edges[:, None] - centers[None, :]))[0]
    return (si[1:] - si[:-1]) / omega


def reconstruct_bl_from_times(rec: FiringRecord, band_limit_hz: float,
                              horizon=None, feasible: bool | None = None
                              ) -> BlReconstruction:
    """Sinc-basis least-squares recovery from IF-TEM intervals.

    Basis functions sit at interval midpoints; the system is solved with a
    pseudoinverse that drops singular values below 1e-8 of the largest.
    ``horizon`` (t_a, t_b) restricts which intervals are used.
    """
    if len(rec.times) < 2:
        raise ValueError("need at least 2 firings")
    if feasible is False:
        warnings.warn("firing density below the perfect-recovery condition",
                      RuntimeWarning, stacklevel=2)
    edges = rec.edges
    y = rec.measurements
    if horizon is not None:
        ta, tb = horizon
        keep = (edges[:-1] >= ta) & (edges[1:] <= tb)
        idx = np.flatnonzero(keep)
        edges = np.concatenate((edges[idx], edges[idx[-1] + 1:idx[-1] + 2]))
        y = y[idx]
    omega = 2 * np.pi * band_limit_hz
    mids = 0.5 * (edges[:-1] + edges[1:])
    B = _sinc_interval_integrals(edges, mids, omega)
    w, _, rank, _ = np.linalg.lstsq(B, y, rcond=PINV_RCOND)
    return BlReconstruction(mids, w, omega, int(rank))


@dataclass(frozen=True)
class SincInterpolant:
    samples: np.ndarray
    ts: float
    t0: float

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        u = (np.atleast_1d(t_arr)[:, None] - self.t0) / self.ts \
            - np.arange(self.samples.size)[None, :]
        out = np.sinc(u) @ self.samples
        return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def reconstruct_bl_classical(samples, ts: float, t0: float = 0.0,
                             band_limit_hz: float | None = None) -> SincInterpolant:
    """Shannon interpolation sum_m samples[m] sinc((t - t0 - m ts) / ts)."""
    if not ts > 0:
        raise ValueError("ts must be positive")
    if band_limit_hz is not None and ts > 1.0 / (2.0 * band_limit_hz) * (1 + 1e-12):
        raise ValueError("sample spacing exceeds the Nyquist spacing")
    return SincInterpolant(np.asarray(samples, dtype=float), float(ts), float(t0))
