"""
Command-line front end.

    temquant fri-mse    --config paper_fri_L3 [--seed N] [--trials N] [--out DIR]
    temquant bl-range   --config paper_bl_range
    temquant bl-mse     --config paper_bl_mse
    temquant step-table --config paper_step_table
    temquant encode     --config CONFIG --signal SIGNAL.json

Configs are flat JSON objects carrying ``schema_version``; the names of the
bundled replica configs (see ``temquant/configs``) can be used in place of
a path. Exit codes: 0 success, 2 config error, 3 infeasible TEM
parameters, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .encoding import FeasibilityError, TemParams, encode_iftem
from .experiments import (ExperimentConfig, run_bl_mse_experiment,
                          run_bl_range_experiment, run_fri_experiment)
from .kernel import TrigPolynomial, filter_fri, make_sos_kernel
from .quantization import step_size_vs_bandwidth, step_size_vs_pulses
from .signals import (AmplitudeBoundError, bl_amplitude_bound,
                      fri_amplitude_bound, make_bl_signal, make_fri_signal)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_CONFIG, EXIT_FEASIBILITY, EXIT_NUMERICAL = 0, 2, 3, 4

log = logging.getLogger("temquant")


class ConfigError(ValueError):
    pass


# key -> (type, required) per command
_INT, _FLOAT, _STR, _BOOL = "int", "float", "str", "bool"
_INTS, _FLOATS = "int list", "float list"
_KERNEL = "'certified', 'minimal' or int"

_BL_KEYS = {
    "omega_sweep_hz": (_FLOATS, True), "trials": (_INT, True),
    "seed": (_INT, True), "energy": (_FLOAT, True),
    "kappa": (_FLOAT, False), "delta": (_FLOAT, False),
    "bias_factor": (_FLOAT, False), "bl_terms": (_INT, False),
    "horizon_ts": (_FLOAT, False), "eval_ts": (_FLOAT, False),
    "bound_convention": (_STR, False), "zero_signal": (_BOOL, False),
    "workers": (_INT, False),
}

SCHEMAS = {
    "fri-mse": {
        "L": (_INT, True), "period": (_FLOAT, True),
        "bits_sweep": (_INTS, True), "trials": (_INT, True),
        "seed": (_INT, True), "kappa": (_FLOAT, False),
        "delta": (_FLOAT, False), "bias_factor": (_FLOAT, False),
        "sample_target": (_INT, False), "grid_step": (_FLOAT, False),
        "workers": (_INT, False), "kernel": (_KERNEL, False),
    },
    "bl-range": _BL_KEYS,
    "bl-mse": {**_BL_KEYS, "bits_sweep": (_INTS, True)},
    "step-table": {
        "L_values": (_INTS, True), "omega_sweep_hz": (_FLOATS, True),
        "alpha": (_FLOAT, True), "kappa": (_FLOAT, True),
        "delta": (_FLOAT, True), "bits": (_INT, True),
        "energy": (_FLOAT, True), "a_max": (_FLOAT, False),
        "g_sup": (_FLOAT, False), "h_l1": (_FLOAT, False),
    },
    "encode": {
        "kappa": (_FLOAT, True), "delta": (_FLOAT, True),
        "t0": (_FLOAT, True), "t_end": (_FLOAT, True),
        "bias": (_FLOAT, False), "bias_factor": (_FLOAT, False),
        "a_max": (_FLOAT, False),
    },
}


def _check_type(key, value, kind):
    def is_int(v):
        return isinstance(v, int) and not isinstance(v, bool)

    def is_num(v):
        return (isinstance(v, (int, float)) and not isinstance(v, bool))

    ok = {
        _INT: lambda v: is_int(v),
        _FLOAT: lambda v: is_num(v),
        _STR: lambda v: isinstance(v, str),
        _BOOL: lambda v: isinstance(v, bool),
        _INTS: lambda v: isinstance(v, list) and all(is_int(x) for x in v),
        _FLOATS: lambda v: isinstance(v, list) and all(is_num(x) for x in v),
        _KERNEL: lambda v: is_int(v) or v in ("certified", "minimal"),
    }[kind](value)
    if not ok:
        raise ConfigError(f"config key '{key}' must be {kind}, got {value!r}")


def load_config(path_or_name: str) -> dict:
    """Read a JSON config from a path or a bundled replica name."""
    p = Path(path_or_name)
    if p.is_file():
        text = p.read_text()
    else:
        name = path_or_name if path_or_name.endswith(".json") else path_or_name + ".json"
        res = resources.files("temquant.configs").joinpath(name)
        if not res.is_file():
            raise ConfigError(f"config '{path_or_name}' not found")
        text = res.read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def validate_config(command: str, cfg: dict) -> dict:
    if "schema_version" not in cfg:
        raise ConfigError("config key 'schema_version' is missing")
    if cfg["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"config key 'schema_version' must be {SCHEMA_VERSION}")
    schema = SCHEMAS[command]
    allowed = set(schema) | {"schema_version", "signal_class", "description"}
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown config key '{key}' for {command}")
    for key, (kind, required) in schema.items():
        if key not in cfg:
            if required:
                raise ConfigError(f"config key '{key}' is missing")
            continue
        _check_type(key, cfg[key], kind)
    return cfg


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _experiment_config(command: str, cfg: dict) -> ExperimentConfig:
    kw = {k: v for k, v in cfg.items()
          if k not in ("schema_version", "description", "signal_class")}
    kw["signal_class"] = "fri" if command == "fri-mse" else "bl"
    for k in ("bits_sweep", "omega_sweep_hz"):
        if k in kw:
            kw[k] = tuple(kw[k])
    try:
        return ExperimentConfig(**kw)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def fmt(x) -> str:
    """Round-trip decimal text, independent of locale."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _utc_now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def write_manifest(out: Path, command, cfg, start, extra=None):
    man = {
        "command": command,
        "config_hash": config_hash(cfg),
        "tool_version": __version__,
        "seed": cfg.get("seed"),
        "start_utc": start,
        "end_utc": _utc_now(),
        "config": cfg,
    }
    if extra:
        man.update(extra)
    (out / "manifest.json").write_text(json.dumps(man, indent=2, sort_keys=True) + "\n")


# --- subcommands -------------------------------------------------------------

def cmd_fri_mse(cfg, out: Path):
    ecfg = _experiment_config("fri-mse", cfg)
    _, curves = run_fri_experiment(ecfg)
    rows = [(r["key"], r["classical_mean"], r["classical_std"],
             r["iftem_mean"], r["iftem_std"], r["n_trials"]) for r in curves]
    write_csv(out / "fri_mse.csv",
              ["bits", "mse_db_classical_mean", "mse_db_classical_std",
               "mse_db_iftem_mean", "mse_db_iftem_std", "n_trials"], rows)
    extra = {"metric": "parameter-space relative error in dB: "
             "10 log10((sum (a-a_est)^2 + sum (tau-tau_est)^2) / "
             "(sum a^2 + sum tau^2)), floored at -200 dB; Dirac pulse "
             "streams have no L2 norm",
             "kernel_halfwidths": dict(zip(("classical", "iftem"),
                                           ecfg.kernel_halfwidths))}
    return f"fri-mse: {len(rows)} rows -> {out / 'fri_mse.csv'}", extra


def cmd_bl_range(cfg, out: Path):
    ecfg = _experiment_config("bl-range", cfg)
    rows = run_bl_range_experiment(ecfg)
    write_csv(out / "bl_range.csv",
              ["omega_hz", "tn_mean", "tn_std", "tn_min", "tn_max", "tn_range"],
              [(r["omega_hz"], r["tn_mean"], r["tn_std"], r["tn_min"],
                r["tn_max"], r["tn_range"]) for r in rows])
    return f"bl-range: {len(rows)} rows -> {out / 'bl_range.csv'}", None


def cmd_bl_mse(cfg, out: Path):
    ecfg = _experiment_config("bl-mse", cfg)
    _, curves = run_bl_mse_experiment(ecfg)
    rows = [(r["key"][0], r["key"][1], r["classical_mean"], r["classical_std"],
             r["iftem_mean"], r["iftem_std"], r["n_trials"]) for r in curves]
    write_csv(out / "bl_mse.csv",
              ["omega_hz", "bits", "mse_db_classical_mean",
               "mse_db_classical_std", "mse_db_iftem_mean", "mse_db_iftem_std",
               "n_trials"], rows)
    return f"bl-mse: {len(rows)} rows -> {out / 'bl_mse.csv'}", None


def _strictly(seq, decreasing):
    pairs = zip(seq, seq[1:])
    return all((b < a) if decreasing else (b > a) for a, b in pairs)


def cmd_step_table(cfg, out: Path):
    try:
        pulses = step_size_vs_pulses(
            cfg["L_values"], cfg["alpha"], cfg["kappa"], cfg["delta"],
            cfg.get("a_max", 1.0), cfg.get("g_sup", 1.0), cfg.get("h_l1", 1.0),
            cfg["bits"])
        bands = step_size_vs_bandwidth(
            cfg["omega_sweep_hz"], cfg["alpha"], cfg["kappa"], cfg["delta"],
            cfg["energy"], cfg["bits"])
    except ValueError as e:
        raise ConfigError(str(e)) from None
    write_csv(out / "step_table_pulses.csv",
              ["L", "delta_iftem", "delta_classic"], pulses)
    write_csv(out / "step_table_bandwidth.csv",
              ["omega_hz", "delta_iftem"], bands)
    ok = (_strictly([r[1] for r in pulses], True)
          and _strictly([r[2] for r in pulses], False)
          and _strictly([r[1] for r in bands], True))
    return (f"step-table: {len(pulses)} L rows, {len(bands)} band rows, "
            f"monotone={'yes' if ok else 'no'} -> {out}"), None


def _load_signal(path):
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read signal spec: {e}") from None
    kind = spec.get("signal_class")
    try:
        if kind == "fri":
            for key in ("amplitudes", "delays", "period"):
                if key not in spec:
                    raise ConfigError(f"signal key '{key}' is missing")
            sig = make_fri_signal(spec["amplitudes"], spec["delays"], spec["period"])
            kernel = make_sos_kernel(spec.get("k_max", sig.L + 1), sig.period)
            return filter_fri(sig, kernel), ("fri", sig.L, kernel)
        if kind == "bl":
            for key in ("coeffs", "band_limit_hz", "energy"):
                if key not in spec:
                    raise ConfigError(f"signal key '{key}' is missing")
            sig = make_bl_signal(spec["coeffs"], spec["band_limit_hz"], spec["energy"])
            return sig, ("bl", None, None)
        if kind == "constant":
            for key in ("value", "period"):
                if key not in spec:
                    raise ConfigError(f"signal key '{key}' is missing")
            return (TrigPolynomial.from_coeffs(spec["period"], [spec["value"]]),
                    ("constant", None, None))
    except AmplitudeBoundError:
        raise
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(f"invalid signal spec: {e}") from None
    raise ConfigError("signal key 'signal_class' must be fri, bl or constant")


def cmd_encode(cfg, out: Path, signal_path):
    if signal_path is None:
        raise ConfigError("encode needs --signal PATH")
    y, (kind, L, kernel) = _load_signal(signal_path)
    if "bias" in cfg:
        bias = cfg["bias"]
    elif "bias_factor" in cfg:
        if kind == "fri":
            c = fri_amplitude_bound(L, cfg.get("a_max", 1.0), kernel.g_sup, 1.0).value
        elif kind == "bl":
            c = bl_amplitude_bound(y.energy_bound, y.band_limit_hz).value
        else:
            c = abs(float(y.coeffs[0].real))
        bias = cfg["bias_factor"] * c
    else:
        raise ConfigError("config key 'bias' is missing (or give 'bias_factor')")
    try:
        params = TemParams(bias, cfg["kappa"], cfg["delta"])
    except ValueError as e:
        raise ConfigError(str(e)) from None
    t0, t_end = cfg["t0"], cfg["t_end"]
    if t_end > t0:
        rec = encode_iftem(y, params, t0, t_end)
        times = rec.times
    else:
        times = np.zeros(0)
    header = {"bias": bias, "kappa": params.kappa, "delta": params.delta,
              "t0": t0, "t_end": t_end, "count": int(times.size),
              "signal_class": kind}
    lines = [json.dumps(header, sort_keys=True)]
    lines += [format(float(t), ".18g") for t in times]
    (out / "firings.txt").write_text("\n".join(lines) + "\n")
    return f"encode: {times.size} firings -> {out / 'firings.txt'}", None


COMMANDS = {
    "fri-mse": cmd_fri_mse,
    "bl-range": cmd_bl_range,
    "bl-mse": cmd_bl_mse,
    "step-table": cmd_step_table,
    "encode": cmd_encode,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="temquant",
        description="IF-TEM vs classical quantization experiments.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="JSON config path or bundled replica name")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--trials", type=int, help="override the trial count")
        p.add_argument("--out", help="output directory (default runs/<command>-<hash>)")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "encode":
            p.add_argument("--signal", help="JSON signal spec")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = _utc_now()
    try:
        cfg = validate_config(args.command, load_config(args.config))
        cfg = dict(cfg)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.trials is not None:
            cfg["trials"] = args.trials
        out = Path(args.out) if args.out else \
            Path("runs") / f"{args.command}-{config_hash(cfg)[:12]}"
        out.mkdir(parents=True, exist_ok=True)
        fn = COMMANDS[args.command]
        if args.command == "encode":
            summary, extra = fn(cfg, out, args.signal)
        else:
            summary, extra = fn(cfg, out)
        write_manifest(out, args.command, cfg, start, extra)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (FeasibilityError, AmplitudeBoundError) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
