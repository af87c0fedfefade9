"""Experiment runner: configuration, execution, persistence, reporting.

Usage::

    kentropy run --config cfg.yaml [--model.V 1.0] [--sizes 128,192,288]
    kentropy run --benchmark ed --L 8 [--out DIR]
    kentropy report RESULTS_DIR

The YAML config has nested sections (``model``, ``sweep``, ``analysis``,
``output``); every field can be overridden on the command line by a flag
with the same dotted name, plus a few short aliases (``--V``, ``--sizes``,
``--nr``, ``--observables``, ``--out``, ...).  ``KE_THREADS`` caps the
worker count; an explicit workers flag wins over the environment.

Exit status: 0 success, 1 sweep/benchmark failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import copy
import logging
import math
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import yaml

from . import __version__, analysis, ed_oracle, ensemble, entropy, models, spectral, storage
from .errors import ConfigurationError, NotSaturatedError, SweepError

logger = logging.getLogger(__name__)

# Below this plateau value an entropy observable is treated as "never grew"
# and its exponent is reported as "x" instead of a fit.
GROWTH_FLOOR = 0.01

TABLE_KEYS = {"dsop": "op", "s1": "vN", "s2": "RE"}

DEFAULT_CONFIG: dict = {
    "label": "run",
    "model": {
        "variant": "aa1d",
        "V": 0.0,
        "W": 0.0,
        "b": models.GOLDEN_RATIO_CONJUGATE,
        "theta": math.pi / 7.0,
        "tprime": 0.0,
        "seed": 1,
    },
    "sweep": {
        "dimension": None,
        "sizes": [128, 192, 288, 384, 576],
        "realizations": 100,
        "observables": ["dsop", "s1", "s2"],
        "renyi_n": None,
        "schmidt_k": 10,
        "workers": 1,
        "t_min": ensemble.DEFAULT_T_MIN,
        "t_max": None,
        "points_per_decade": ensemble.DEFAULT_POINTS_PER_DECADE,
    },
    "analysis": {
        "saturation": True,
        "growth": False,
        "growth_observables": ["s1", "s2"],
        "growth_window": None,
        "growth_size": None,
        "schmidt_betas": [0.5, 0.6, 1.0, 2.0],
        "schmidt_beta": None,
        "schmidt_window": None,
    },
    "output": {
        "directory": "runs/out",
        "per_realization_columns": False,
    },
}

ALIASES = {
    "model": "model.variant",
    "V": "model.V",
    "W": "model.W",
    "b": "model.b",
    "theta": "model.theta",
    "tprime": "model.tprime",
    "seed": "model.seed",
    "sizes": "sweep.sizes",
    "nr": "sweep.realizations",
    "observables": "sweep.observables",
    "workers": "sweep.workers",
    "dimension": "sweep.dimension",
    "out": "output.directory",
    "label": "label",
}

_LIST_FIELDS = {
    "sweep.sizes",
    "sweep.observables",
    "analysis.growth_observables",
    "analysis.schmidt_betas",
    "analysis.growth_window",
    "analysis.schmidt_window",
}


class ConfigError(ConfigurationError):
    """Invalid configuration, reported with the offending dotted field."""


def _flatten(d: dict, prefix: str = "") -> Dict[str, object]:
    out: Dict[str, object] = {}
    for key, value in d.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, dotted + "."))
        else:
            out[dotted] = value
    return out


def _set_dotted(config: dict, dotted: str, value):
    keys = dotted.split(".")
    node = config
    for key in keys[:-1]:
        node = node[key]
    node[keys[-1]] = value


def _parse_scalar(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError:
        return text


def _coerce_override(dotted: str, raw: str):
    if dotted in _LIST_FIELDS:
        parts = [p for p in raw.split(",") if p != ""]
        return [_parse_scalar(p) for p in parts]
    return _parse_scalar(raw)


def apply_overrides(config: dict, tokens: List[str]) -> List[str]:
    """Apply ``--dotted.name value`` (or alias) overrides in place.

    Returns the list of dotted fields that were overridden.
    """
    known = set(_flatten(DEFAULT_CONFIG))
    touched: List[str] = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument {token!r}; overrides look like --field value")
        body = token[2:]
        if "=" in body:
            name, raw = body.split("=", 1)
            i += 1
        else:
            name = body
            if i + 1 >= len(tokens):
                raise ConfigError(f"flag --{name} is missing a value")
            raw = tokens[i + 1]
            i += 2
        dotted = ALIASES.get(name, name)
        if dotted not in known:
            raise ConfigError(f"unknown config field '{dotted}'")
        _set_dotted(config, dotted, _coerce_override(dotted, raw))
        touched.append(dotted)
    return touched


def _require(cond: bool, field: str, message: str):
    if not cond:
        raise ConfigError(f"config field '{field}': {message}")


def validate_config(config: dict) -> dict:
    """Type/consistency checks with field-level messages."""
    known = set(_flatten(DEFAULT_CONFIG))
    for dotted in _flatten(config):
        if dotted not in known:
            raise ConfigError(f"unknown config field '{dotted}'")

    model = config["model"]
    _require(isinstance(model["seed"], int), "model.seed", "must be an integer")
    for key in ("V", "W", "b", "theta", "tprime"):
        _require(
            isinstance(model[key], (int, float)) and not isinstance(model[key], bool),
            f"model.{key}",
            "must be a number",
        )
    try:
        models.Variant.parse(model["variant"])
    except ConfigurationError as exc:
        raise ConfigError(f"config field 'model.variant': {exc}") from None

    sweep = config["sweep"]
    _require(
        isinstance(sweep["sizes"], list) and sweep["sizes"] != []
        and all(isinstance(s, int) and s > 0 for s in sweep["sizes"]),
        "sweep.sizes",
        "must be a non-empty list of positive integers",
    )
    _require(
        isinstance(sweep["realizations"], int) and sweep["realizations"] >= 1,
        "sweep.realizations",
        "must be a positive integer",
    )
    _require(
        isinstance(sweep["observables"], list)
        and all(o in ensemble.OBSERVABLES for o in sweep["observables"])
        and sweep["observables"] != [],
        "sweep.observables",
        f"must be a non-empty subset of {list(ensemble.OBSERVABLES)}",
    )
    _require(
        isinstance(sweep["workers"], int) and sweep["workers"] >= 1,
        "sweep.workers",
        "must be a positive integer",
    )
    _require(
        isinstance(sweep["t_min"], (int, float)) and sweep["t_min"] > 0,
        "sweep.t_min",
        "must be a positive number",
    )
    _require(
        sweep["t_max"] is None or (isinstance(sweep["t_max"], (int, float)) and sweep["t_max"] > 0),
        "sweep.t_max",
        "must be null or a positive number",
    )
    _require(
        isinstance(sweep["points_per_decade"], int) and sweep["points_per_decade"] >= 1,
        "sweep.points_per_decade",
        "must be a positive integer",
    )
    _require(
        sweep["dimension"] in (None, 1, 2),
        "sweep.dimension",
        "must be null, 1 or 2",
    )
    if "sn" in sweep["observables"]:
        _require(
            isinstance(sweep["renyi_n"], (int, float)) and sweep["renyi_n"] > 1,
            "sweep.renyi_n",
            "must be > 1 when observable 'sn' is requested",
        )

    out = config["output"]
    _require(isinstance(out["directory"], str) and out["directory"] != "",
             "output.directory", "must be a non-empty path")
    _require(isinstance(out["per_realization_columns"], bool),
             "output.per_realization_columns", "must be a boolean")

    ana = config["analysis"]
    for field in ("growth_window", "schmidt_window"):
        win = ana[field]
        _require(
            win is None or (isinstance(win, list) and len(win) == 2
                            and all(isinstance(v, (int, float)) for v in win)),
            f"analysis.{field}",
            "must be null or a [t_lo, t_hi] pair",
        )
    return config


def load_config(path: Optional[str], overrides: List[str]):
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                user = yaml.safe_load(fh) or {}
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file is not valid YAML: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a mapping of sections")
        flat = _flatten(user)
        known = set(_flatten(DEFAULT_CONFIG))
        for dotted, value in flat.items():
            if dotted not in known:
                raise ConfigError(f"unknown config field '{dotted}'")
            _set_dotted(config, dotted, value)
    touched = apply_overrides(config, overrides)
    if "KE_THREADS" in os.environ and "sweep.workers" not in touched:
        cap = int(os.environ["KE_THREADS"])
        config["sweep"]["workers"] = max(1, min(config["sweep"]["workers"], cap))
    return validate_config(config), touched


def sweep_config_from(config: dict) -> ensemble.SweepConfig:
    m, s = config["model"], config["sweep"]
    params = models.ModelParams(
        variant=models.Variant.parse(m["variant"]),
        V=float(m["V"]),
        W=float(m["W"]),
        b=float(m["b"]),
        theta=float(m["theta"]),
        tprime=float(m["tprime"]),
        seed=int(m["seed"]),
    )
    grid = ensemble.TimeGridSpec(
        t_min=float(s["t_min"]),
        t_max=None if s["t_max"] is None else float(s["t_max"]),
        points_per_decade=int(s["points_per_decade"]),
    )
    return ensemble.SweepConfig(
        params=params,
        sizes=tuple(s["sizes"]),
        observables=tuple(s["observables"]),
        n_realizations=int(s["realizations"]),
        grid=grid,
        renyi_n=None if s["renyi_n"] is None else float(s["renyi_n"]),
        schmidt_k=int(s["schmidt_k"]),
        workers=int(s["workers"]),
        dimension=s["dimension"],
    )


def physics_fields(config: dict) -> dict:
    sweep = {k: v for k, v in config["sweep"].items() if k != "workers"}
    return {"model": config["model"], "sweep": sweep}


def _series_label(config: dict) -> Tuple[str, float]:
    variant = config["model"]["variant"]
    if variant == "anderson2d":
        return "W", float(config["model"]["W"])
    return "V", float(config["model"]["V"])


def build_analysis(config: dict, cfg: ensemble.SweepConfig, result: ensemble.SweepResult) -> dict:
    """Saturation exponents, growth fits and Schmidt fits for one run."""
    ana = config["analysis"]
    sizes = list(cfg.sizes)
    exponents: Dict[str, Optional[float]] = {}
    r2: Dict[str, Optional[float]] = {}
    stderr: Dict[str, Optional[float]] = {}
    no_growth: List[str] = []
    saturation_details: Dict[str, dict] = {}
    fit_windows: Dict[str, object] = {}

    for obs, key in TABLE_KEYS.items():
        if obs not in cfg.observables or not ana["saturation"]:
            continue
        points = []
        details = {}
        grew = True
        for L in sizes:
            series = result.series[(L, obs)]
            try:
                sat = analysis.saturation(series.times, series.mean)
            except NotSaturatedError as exc:
                logger.info("%s at L=%d has no plateau (slope %.3f)", obs, L, exc.tail_slope)
                grew = False
                break
            if sat.s_sat < GROWTH_FLOOR:
                grew = False
                break
            points.append((L, sat.t_half))
            details[str(L)] = {"s_sat": sat.s_sat, "t_half": sat.t_half}
        saturation_details[key] = details
        if not grew:
            exponents[key] = None
            r2[key] = None
            stderr[key] = None
            no_growth.append(key)
            continue
        if len(points) < 4:
            exponents[key] = None
            r2[key] = None
            stderr[key] = None
            continue
        fit = analysis.fit_saturation_exponent(points)
        exponents[key] = fit.exponent
        r2[key] = fit.r_squared
        stderr[key] = fit.stderr
        fit_windows[key] = [fit.window[0], fit.window[1]]

    growth_fits: Dict[str, dict] = {}
    if ana["growth"]:
        L = int(ana["growth_size"] or max(sizes))
        for obs in ana["growth_observables"]:
            if (L, obs) not in result.series:
                continue
            series = result.series[(L, obs)]
            window = ana["growth_window"]
            if window is None:
                try:
                    sat = analysis.saturation(series.times, series.mean)
                except NotSaturatedError:
                    continue
                window = analysis.intermediate_window(sat.t_half)
            try:
                fit = analysis.fit_growth_exponent(series.times, series.mean, tuple(window))
            except ValueError as exc:
                logger.warning("growth fit failed for %s at L=%d: %s", obs, L, exc)
                continue
            growth_fits[obs] = {
                "L": L,
                "exponent": fit.exponent,
                "r_squared": fit.r_squared,
                "window": [fit.window[0], fit.window[1]],
            }

    schmidt_fits: List[dict] = []
    beta_comparison: Dict[str, List[float]] = {}
    primary_beta = None
    if "schmidt" in cfg.observables and result.schmidt:
        L = max(result.schmidt)
        sc = result.schmidt[L]
        window = ana["schmidt_window"]
        if window is None:
            window = [2.0, float(sc.times[-1])]
        fits = {}
        for beta in ana["schmidt_betas"]:
            fit = analysis.fit_schmidt_decay(sc.times, sc.typical_log, beta, tuple(window))
            fits[beta] = fit
            beta_comparison[repr(float(beta))] = [float(x) for x in fit.r_squared]
        primary_beta = ana["schmidt_beta"]
        if primary_beta is None:
            primary_beta = max(fits, key=lambda b: float(np.mean(fits[b].r_squared)))
        best = fits[float(primary_beta)]
        schmidt_fits = [
            {"i": i + 1, "c": float(best.c[i]), "d": float(best.d[i]),
             "r2": float(best.r_squared[i])}
            for i in range(len(best.c))
        ]
        fit_windows["schmidt"] = [float(window[0]), float(window[1])]

    label_key, label_value = _series_label(config)
    payload = {
        "model": config["model"]["variant"],
        "params": dict(config["model"]),
        "series_key": {label_key: label_value},
        "sizes": sizes,
        "exponents": exponents,
        "r2": r2,
        "stderr": stderr,
        "no_growth": sorted(no_growth),
        "saturation": saturation_details,
        "fit_windows": fit_windows,
        "growth_fits": growth_fits,
        "schmidt_fits": schmidt_fits,
        "schmidt_beta": None if primary_beta is None else float(primary_beta),
        "schmidt_beta_comparison": beta_comparison,
    }
    return payload


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def run_experiment(config: dict) -> int:
    cfg = sweep_config_from(config)
    outdir = Path(config["output"]["directory"])
    with storage.RunLock(outdir):
        started = _utcnow()
        t0 = time.perf_counter()
        result = ensemble.run_sweep(cfg)
        elapsed = time.perf_counter() - t0

        with open(outdir / "config.yaml", "w", encoding="utf-8", newline="\n") as fh:
            yaml.safe_dump(config, fh, sort_keys=True)
        for (L, obs), series in sorted(result.series.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            storage.write_series_csv(
                outdir / "series" / f"{obs}_L{L}.csv",
                series,
                per_realization=config["output"]["per_realization_columns"],
            )
        for L, sc in sorted(result.schmidt.items()):
            storage.write_schmidt_series(outdir / "schmidt", L, sc)
        analysis_payload = build_analysis(config, cfg, result)
        storage.write_json(outdir / "analysis.json", analysis_payload)
        manifest = {
            "config_hash": storage.config_hash(physics_fields(config)),
            "seed": int(config["model"]["seed"]),
            "version": __version__,
            "started": started,
            "finished": _utcnow(),
            "elapsed_seconds": elapsed,
            "skipped_realizations": [
                {"L": L, "realization": r, "error": msg} for (L, r, msg) in result.skipped
            ],
        }
        storage.write_json(outdir / "manifest.json", manifest)

    _print_report_rows([analysis_payload])
    return 0


def run_ed_benchmark(L: int, out: Optional[str]) -> int:
    """Clean-chain comparison of the correlation-matrix path against ED."""
    lattice = models.LatticeSpec(dimension=1, L=L)
    params = models.ModelParams(variant=models.Variant.CLEAN_TB)
    h = models.build_hamiltonian(lattice, params, models.draw_realization(params, 0))
    d = spectral.diagonalize(h)
    a_sites = lattice.a_sites()
    site = models.operator_site(lattice)
    occupied = models.neel_occupation(lattice)
    times = np.geomspace(0.1, 10.0, 50)

    op_eval = entropy.OperatorCorrelationEvaluator(d, site, a_sites)
    st_eval = entropy.StateCorrelationEvaluator(d, occupied, a_sites)
    s_zero = entropy.renyi2_entropy(op_eval(0.0))
    s_zero_ed = ed_oracle.operator_renyi_ed(h, site, lattice.n_a, 0.0)

    rows = []
    for t in times:
        c = st_eval(t)
        rows.append(
            dict(
                t=t,
                dsop_sk=entropy.renyi2_entropy(op_eval(t)) - s_zero,
                dsop_ed=ed_oracle.operator_renyi_ed(h, site, lattice.n_a, t) - s_zero_ed,
                s1_sk=entropy.von_neumann_entropy(c),
                s2_sk=entropy.renyi2_entropy(c),
            )
        )
        s1_ed, s2_ed = ed_oracle.state_entropies_ed(h, occupied, lattice.n_a, t)
        rows[-1]["s1_ed"] = s1_ed
        rows[-1]["s2_ed"] = s2_ed

    if out is not None:
        header = ["t", "dsop_sk", "dsop_ed", "s1_sk", "s1_ed", "s2_sk", "s2_ed"]
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(repr(float(row[k])) for k in header))
        path = Path(out) / f"ed_benchmark_L{L}.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    status = 0
    for name, sk, ref in (
        ("dsop", "dsop_sk", "dsop_ed"),
        ("s1", "s1_sk", "s1_ed"),
        ("s2", "s2_sk", "s2_ed"),
    ):
        dev = max(abs(row[sk] - row[ref]) for row in rows)
        ok = dev < 1e-8
        print(f"ed-benchmark L={L} {name}: max|SK-ED| = {dev:.3e} {'PASS' if ok else 'FAIL'}")
        if not ok:
            status = 1
    return status


def _format_exponent(payload: dict, key: str) -> str:
    expo = payload.get("exponents", {}).get(key, "missing")
    if expo is None:
        return "x" if key in payload.get("no_growth", []) else "missing"
    if expo == "missing":
        return "missing"
    fit_r2 = payload.get("r2", {}).get(key)
    return f"{expo:.2f} (R2={fit_r2:.3f})" if fit_r2 is not None else f"{expo:.2f}"


def _print_report_rows(payloads: List[dict]):
    if not payloads:
        return
    label_key = next(iter(payloads[0].get("series_key", {"V": None})))
    print(f"{label_key:>6}  {'alpha_op':>18}  {'alpha_vN':>18}  {'alpha_RE':>18}")
    for payload in payloads:
        value = payload.get("series_key", {}).get(label_key, float("nan"))
        cells = [_format_exponent(payload, key) for key in ("op", "vN", "RE")]
        print(f"{value:>6}  {cells[0]:>18}  {cells[1]:>18}  {cells[2]:>18}")


def run_report(directory: str) -> int:
    root = Path(directory)
    paths = []
    if (root / "analysis.json").exists():
        paths.append(root / "analysis.json")
    paths.extend(sorted(root.glob("*/analysis.json")))
    if not paths:
        print(f"no completed runs under {root}", file=sys.stderr)
        return 1
    payloads = [storage.read_json(p) for p in paths]
    key = next(iter(payloads[0].get("series_key", {"V": None})))
    payloads.sort(key=lambda p: p.get("series_key", {}).get(key, 0.0))
    _print_report_rows(payloads)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = argparse.ArgumentParser(prog="kentropy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute a sweep or the ED benchmark")
    runp.add_argument("--config", default=None, help="YAML config file")
    runp.add_argument("--benchmark", choices=["ed"], default=None)
    runp.add_argument("--L", type=int, default=8, help="benchmark chain length")
    repp = sub.add_parser("report", help="print the exponent table for a results directory")
    repp.add_argument("directory")

    args, overrides = parser.parse_known_args(argv)
    if args.command == "report":
        return run_report(args.directory)

    if args.benchmark == "ed":
        out = None
        tokens = list(overrides)
        if "--out" in tokens:
            k = tokens.index("--out")
            out = tokens[k + 1]
        return run_ed_benchmark(args.L, out)

    try:
        config, _ = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        return run_experiment(config)
    except SweepError as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
