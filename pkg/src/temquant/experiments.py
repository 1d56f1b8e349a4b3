"""
Monte-Carlo harness comparing IF-TEM time quantization with classical
amplitude quantization.

Every trial draws from its own counter-based stream, ``Philox(key=seed ^
trial)``, so results do not depend on execution order and trials can be
farmed out to a process pool.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .encoding import (FeasibilityError, TemParams, encode_iftem,
                       feasible_bl, feasible_fri, interval_bounds,
                       sample_classical)
from .kernel import filter_fri, make_sos_kernel
from .quantization import (make_amplitude_quantizer, make_time_quantizer,
                           quantize_firing_record, quantize_with_flag)
from .reconstruction import (estimate_fri_omp, fsc_from_classical,
                             fsc_from_iftem, omp_safe_halfwidth,
                             reconstruct_bl_classical,
                             reconstruct_bl_from_times)
from .signals import (AmplitudeBoundError, bl_amplitude_bound,
                      fri_amplitude_bound, make_bl_signal, make_fri_signal)

log = logging.getLogger(__name__)

MSE_FLOOR_DB = -200.0

__all__ = ["ExperimentConfig", "TrialResult", "mse_db", "mse_db_params",
           "trial_rng", "fri_setup", "bl_bound", "run_fri_experiment",
           "run_bl_range_experiment", "run_bl_mse_experiment",
           "aggregate", "MSE_FLOOR_DB"]


@dataclass(frozen=True)
class ExperimentConfig:
    signal_class: str = "fri"
    L: int = 3
    period: float = 1.0
    bits_sweep: tuple = (2, 3, 4, 5, 6, 7, 8, 9, 10)
    omega_sweep_hz: tuple = (5.0, 10.0, 30.0, 50.0)
    trials: int = 50
    seed: int = 0
    kappa: float | None = None
    delta: float | None = None
    bias_factor: float | None = None
    sample_target: int | None = None
    grid_step: float = 0.05
    energy: float = 1.6
    bl_terms: int = 3
    horizon_ts: float = 6.0
    eval_ts: float = 5.0
    bound_convention: str = "angular"
    zero_signal: bool = False
    workers: int = 1
    kernel: str | int = "certified"

    def __post_init__(self):
        if self.signal_class not in ("fri", "bl"):
            raise ValueError(f"signal_class must be 'fri' or 'bl', got "
                             f"{self.signal_class!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bs = list(self.bits_sweep)
        if not bs or any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
            raise ValueError("bits_sweep must be nonempty and increasing")
        if any(b < 1 for b in bs):
            raise ValueError("bits_sweep entries must be >= 1")
        if self.bound_convention not in ("angular", "hz_literal"):
            raise ValueError("bound_convention must be 'angular' or 'hz_literal'")
        if not self.period > 0:
            raise ValueError("period must be positive")
        if isinstance(self.kernel, str):
            if self.kernel not in ("certified", "minimal"):
                raise ValueError("kernel must be 'certified', 'minimal' or an int")
        elif int(self.kernel) < self.L:
            raise ValueError("kernel half-width must be >= L")

    @property
    def kernel_halfwidths(self) -> tuple[int, int]:
        """(classical, IF-TEM) passband half-widths; IF-TEM gets one more.

        ``"minimal"`` gives (L, L + 1), the smallest sets meeting the 2L and
        2L + 2 coefficient counts.  ``"certified"`` widens the classical set
        until OMP exact recovery on the delay grid is guaranteed.  An int
        fixes the classical half-width.
        """
        if self.kernel == "minimal":
            k = self.L
        elif self.kernel == "certified":
            k = omp_safe_halfwidth(self.L, self.period, self.grid_step)
        else:
            k = int(self.kernel)
        return k, k + 1

    @property
    def tem_kappa(self) -> float:
        if self.kappa is not None:
            return self.kappa
        if self.signal_class == "bl":
            return 0.4
        return 0.5 if self.L <= 4 else 2.0

    @property
    def tem_delta(self) -> float:
        if self.delta is not None:
            return self.delta
        return 0.075 if self.signal_class == "bl" else 30.0

    @property
    def tem_bias_factor(self) -> float:
        if self.bias_factor is not None:
            return self.bias_factor
        return 6.0 if self.signal_class == "bl" else 10.0


@dataclass(frozen=True)
class TrialResult:
    trial: int
    bits: int
    mse_db_classical: float
    mse_db_iftem: float
    samples_used: tuple
    saturated: tuple = (False, False)
    omega_hz: float = field(default=float("nan"))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    key = (int(seed) ^ int(trial)) & (2 ** 64 - 1)
    return np.random.Generator(np.random.Philox(key=key))


def _to_db(r2):
    if r2 <= 0:
        return MSE_FLOOR_DB
    return max(MSE_FLOOR_DB, 10.0 * math.log10(r2))


def mse_db(x_true, x_est, t_start=0.0, t_end=1.0, grid_points=4096):
    """20 log10(||x - x_est|| / ||x||) over [t_start, t_end], trapezoid rule.

    Returns ``MSE_FLOOR_DB`` for an exact match.
    """
    if grid_points < 256:
        raise ValueError("grid_points must be >= 256")
    t = np.linspace(t_start, t_end, grid_points)
    x = np.asarray(x_true(t), dtype=float)
    d = x - np.asarray(x_est(t), dtype=float)
    ref = np.trapezoid(x * x, t)
    if ref <= 0:
        raise ValueError("reference signal has zero norm")
    return _to_db(np.trapezoid(d * d, t) / ref)


def mse_db_params(amplitudes, delays, est_amplitudes, est_delays):
    """Parameter-space error for pulse streams, matched in delay order.

    r^2 = (sum (a - a_est)^2 + sum (tau - tau_est)^2) / (sum a^2 + sum tau^2).
    """
    o, oe = np.argsort(delays), np.argsort(est_delays)
    a, tau = np.asarray(amplitudes)[o], np.asarray(delays)[o]
    ae, te = np.asarray(est_amplitudes)[oe], np.asarray(est_delays)[oe]
    ref = np.sum(a * a) + np.sum(tau * tau)
    if ref <= 0:
        raise ValueError("reference signal has zero norm")
    return _to_db((np.sum((a - ae) ** 2) + np.sum((tau - te) ** 2)) / ref)


# --- FRI ---------------------------------------------------------------------

@dataclass(frozen=True)
class FriSetup:
    kernel_iftem: object
    kernel_classical: object
    c_iftem: float
    c_classical: float
    params: TemParams
    n_nominal: int


def fri_setup(cfg: ExperimentConfig) -> FriSetup:
    """Kernels, amplitude bounds and TEM parameters shared by all trials.

    The bias starts at ``bias_factor * c`` and is raised in steps of c/2
    until a zero input yields ``sample_target`` firings per period
    (default 8L).
    """
    L, T = cfg.L, cfg.period
    h_cl, h_if = cfg.kernel_halfwidths
    k_if = make_sos_kernel(h_if, T)
    k_cl = make_sos_kernel(h_cl, T)
    c_if = fri_amplitude_bound(L, 1.0, k_if.g_sup, 1.0).value
    c_cl = fri_amplitude_bound(L, 1.0, k_cl.g_sup, 1.0).value
    kd = cfg.tem_kappa * cfg.tem_delta
    target = cfg.sample_target if cfg.sample_target is not None else 8 * L
    target = max(target, k_if.size)
    b = cfg.tem_bias_factor * c_if
    # a zero input fires every kd / b seconds
    while math.floor(T * b / kd * (1 + 1e-12)) < target:
        b += 0.5 * c_if
    params = TemParams(b, cfg.tem_kappa, cfg.tem_delta)
    if not feasible_fri(params, c_if, L, T):
        raise FeasibilityError(
            f"TEM parameters {params} violate the FRI firing-rate condition")
    return FriSetup(k_if, k_cl, c_if, c_cl, params,
                    int(math.floor(T * b / kd * (1 + 1e-12))))


def _draw_fri(rng, cfg):
    n_grid = int(round(cfg.period / cfg.grid_step))
    slots = rng.choice(np.arange(1, n_grid + 1), size=cfg.L, replace=False)
    delays = np.sort(slots) * cfg.grid_step
    amps = rng.uniform(-1.0, 1.0, cfg.L)
    return make_fri_signal(amps, delays, cfg.period)


def _fri_trial(args):
    cfg, setup, trial = args
    rng = trial_rng(cfg.seed, trial)
    sig = _draw_fri(rng, cfg)
    T, L = cfg.period, cfg.L
    y_if = filter_fri(sig, setup.kernel_iftem)
    y_cl = filter_fri(sig, setup.kernel_classical)
    rec = encode_iftem(y_if, setup.params, 0.0, T, c=setup.c_iftem)
    n = len(rec)
    ts = T / n
    samples = sample_classical(y_cl, ts, n)
    results = []
    for bits in cfg.bits_sweep:
        qt = make_time_quantizer(setup.params, setup.c_iftem, bits)
        rec_q = quantize_firing_record(rec, qt)
        est_if = estimate_fri_omp(fsc_from_iftem(rec_q, setup.kernel_iftem),
                                  L, T=T, grid_step=cfg.grid_step)
        qa = make_amplitude_quantizer(setup.c_classical, bits)
        samples_q, sat_cl = quantize_with_flag(qa, samples)
        est_cl = estimate_fri_omp(
            fsc_from_classical(samples_q, setup.kernel_classical, ts),
            L, T=T, grid_step=cfg.grid_step)
        results.append(TrialResult(
            trial, int(bits),
            mse_db_params(sig.amplitudes, sig.delays, est_cl.amplitudes, est_cl.delays),
            mse_db_params(sig.amplitudes, sig.delays, est_if.amplitudes, est_if.delays),
            (n, n), (bool(sat_cl), bool(rec_q.saturated))))
    return results


def _map(fn, jobs, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def aggregate(results, key=lambda r: r.bits):
    """Mean/std of each method's dB error per key, in sorted key order."""
    groups = {}
    for r in results:
        groups.setdefault(key(r), []).append(r)
    rows = []
    for k in sorted(groups):
        rs = sorted(groups[k], key=lambda r: r.trial)
        cl = np.array([r.mse_db_classical for r in rs])
        it = np.array([r.mse_db_iftem for r in rs])
        rows.append({"key": k, "classical_mean": float(cl.mean()),
                     "classical_std": float(cl.std()),
                     "iftem_mean": float(it.mean()), "iftem_std": float(it.std()),
                     "n_trials": len(rs)})
    return rows


def run_fri_experiment(cfg: ExperimentConfig):
    """Both FRI pipelines for every trial and bit depth.

    Returns ``(trial_results, curves)``; ``curves`` holds one dict per bit
    depth with mean and std of the dB error for each method. Errors are in
    parameter space (pulse amplitudes and delays) because Dirac streams have
    no L2 norm.
    """
    if cfg.signal_class != "fri":
        raise ValueError("run_fri_experiment needs signal_class='fri'")
    setup = fri_setup(cfg)
    log.info("FRI L=%d: b=%.6g kappa=%g delta=%g, ~%d firings per period",
             cfg.L, setup.params.bias, setup.params.kappa,
             setup.params.delta, setup.n_nominal)
    jobs = [(cfg, setup, t) for t in range(cfg.trials)]
    results = [r for batch in _map(_fri_trial, jobs, cfg.workers) for r in batch]
    return results, aggregate(results)


# --- BL ----------------------------------------------------------------------

def bl_bound(energy, band_limit_hz, convention="angular"):
    """Amplitude bound c = sqrt(E Omega / pi) under either band-limit reading.

    ``"angular"`` uses Omega = 2 pi f (rad/s); ``"hz_literal"`` inserts the
    band limit in Hz directly, which is what the published BL interval
    ranges correspond to.
    """
    if convention == "angular":
        return bl_amplitude_bound(energy, band_limit_hz).value
    if convention == "hz_literal":
        if not (energy > 0 and band_limit_hz > 0):
            raise ValueError("energy and band limit must be positive")
        return math.sqrt(energy * band_limit_hz / math.pi)
    raise ValueError(f"unknown bound convention {convention!r}")


def _bl_params(cfg, f):
    c = bl_bound(cfg.energy, f, cfg.bound_convention)
    params = TemParams(cfg.tem_bias_factor * c, cfg.tem_kappa, cfg.tem_delta)
    # feasibility always judged against the true band limit 2 pi f rad/s
    if not feasible_bl(params, c, f):
        raise FeasibilityError(
            f"firing density too low for a {f} Hz band limit: "
            f"dt_max={interval_bounds(params, c)[1]:.4g} s")
    return c, params


def _draw_bl(rng, cfg, f, c, max_draws=10000):
    n = 2 * cfg.bl_terms + 1
    if cfg.zero_signal:
        return make_bl_signal(np.zeros(n), f, cfg.energy, amplitude_bound=c), 0
    for redraws in range(max_draws):
        try:
            return make_bl_signal(rng.uniform(-1.0, 1.0, n), f, cfg.energy,
                                  amplitude_bound=c), redraws
        except AmplitudeBoundError:
            continue
    raise FeasibilityError(f"no BL draw within amplitude bound {c:.4g} "
                           f"after {max_draws} attempts")


def _bl_window(cfg, f):
    ts = 1.0 / (2.0 * f)
    return cfg.horizon_ts * ts, cfg.eval_ts * ts


def _bl_range_trial(args):
    cfg, f, c, params, trial = args
    rng = trial_rng(cfg.seed, trial)
    sig, redraws = _draw_bl(rng, cfg, f, c)
    h, _ = _bl_window(cfg, f)
    rec = encode_iftem(sig, params, -h, h, c=c)
    return rec.intervals, redraws


def run_bl_range_experiment(cfg: ExperimentConfig):
    """Firing-interval statistics per band limit, pooled over all trials.

    Returns one dict per band limit with keys omega_hz, tn_mean, tn_std,
    tn_min, tn_max, tn_range, plus the interval bounds dt_min/dt_max and the
    amplitude bound c used.
    """
    if cfg.signal_class != "bl":
        raise ValueError("run_bl_range_experiment needs signal_class='bl'")
    setups = [(f, *_bl_params(cfg, f)) for f in cfg.omega_sweep_hz]
    rows = []
    for f, c, params in setups:
        jobs = [(cfg, f, c, params, t) for t in range(cfg.trials)]
        out = _map(_bl_range_trial, jobs, cfg.workers)
        Tn = np.concatenate([o[0] for o in out])
        redraws = sum(o[1] for o in out)
        if redraws:
            log.info("BL %g Hz: %d draws rejected by the amplitude bound", f, redraws)
        lo, hi = interval_bounds(params, c)
        rows.append({"omega_hz": float(f), "tn_mean": float(Tn.mean()),
                     "tn_std": float(Tn.std()), "tn_min": float(Tn.min()),
                     "tn_max": float(Tn.max()), "tn_range": float(np.ptp(Tn)),
                     "dt_min": lo, "dt_max": hi, "c": c, "bias": params.bias,
                     "n_intervals": int(Tn.size)})
    return rows


def _bl_mse_trial(args):
    cfg, f, c, params, trial = args
    rng = trial_rng(cfg.seed, trial)
    sig, _ = _draw_bl(rng, cfg, f, c)
    h, w = _bl_window(cfg, f)
    rec = encode_iftem(sig, params, -h, h, c=c)
    n = len(rec)
    ts = 2 * h / n
    t0 = -h + 0.5 * ts
    samples = sample_classical(sig, ts, n, t0)
    results = []
    for bits in cfg.bits_sweep:
        rec_q = quantize_firing_record(rec, make_time_quantizer(params, c, bits))
        x_if = reconstruct_bl_from_times(rec_q, f)
        samples_q, sat = quantize_with_flag(make_amplitude_quantizer(c, bits), samples)
        x_cl = reconstruct_bl_classical(samples_q, ts, t0, band_limit_hz=f)
        results.append(TrialResult(
            trial, int(bits), mse_db(sig, x_cl, -w, w), mse_db(sig, x_if, -w, w),
            (n, n), (bool(sat), bool(rec_q.saturated)), float(f)))
    return results


def run_bl_mse_experiment(cfg: ExperimentConfig):
    """IF-TEM vs Nyquist-style sampling of BL signals, per band limit and bits.

    Both methods get the same number of measurements on the same horizon;
    errors are measured in the time domain over the central window.
    Returns ``(trial_results, curves)`` with curves keyed by (omega_hz, bits).
    """
    if cfg.signal_class != "bl":
        raise ValueError("run_bl_mse_experiment needs signal_class='bl'")
    setups = [(f, *_bl_params(cfg, f)) for f in cfg.omega_sweep_hz]
    results = []
    for f, c, params in setups:
        jobs = [(cfg, f, c, params, t) for t in range(cfg.trials)]
        results += [r for batch in _map(_bl_mse_trial, jobs, cfg.workers)
                    for r in batch]
    return results, aggregate(results, key=lambda r: (r.omega_hz, r.bits))


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
