"""Command-line interface: solve one problem, or run convergence studies.

Commands
--------
solve        integrate one configuration to T, write a snapshot and nodal CSV
convergence  run a sweep study (from --preset or --config), fit orders,
             check acceptance bands
compare      like convergence but requires at least two schemes per study

Exit codes: 0 success, 2 configuration error, 3 blow-up, 4 an acceptance
band failed.  Config files are TOML with nesting only for [problem], [sweep]
and [reference]; unknown keys are a hard error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib as _toml
except ModuleNotFoundError:  # python < 3.11
    import tomli as _toml

from .errors import BlowUpError, ConfigurationError
from .experiments import (
    Datum,
    ErrorRatioBand,
    FluctuationBand,
    GapBand,
    OrderFit,
    RefSpec,
    SlopeBand,
    StudySpec,
    evaluate_bands,
    fit_order,
    run_study,
    write_csv,
    write_field,
)
from .integrators import SchemeConfig, evolve, initial_field
from .physics import Nonlinearity, Potential
from .presets import PRESET_NAMES, preset_studies
from .spectral import PeriodicGrid, nodal_values

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_BANDS = 4

_TOP_KEYS_SOLVE = {"label", "scheme", "tau", "N", "fs_oversample", "problem"}
_TOP_KEYS_STUDY = {
    "label", "schemes", "fs_oversample", "verify_reference", "bands",
    "norms", "problem", "sweep", "reference",
}
_PROBLEM_KEYS = {
    "a", "b", "T", "potential", "depth", "left", "right", "gamma", "value",
    "nonlinearity", "lambda", "sigma", "lambda2", "sigma2",
    "datum", "amplitude", "mode",
}
_SWEEP_KEYS = {"kind", "values"}
_REFERENCE_KEYS = {"scheme", "tau", "h"}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ewinlse",
        description="Exponential wave integrators for the periodic NLSE",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "integrate one problem to T"),
        ("convergence", "run a convergence study and check order bands"),
        ("compare", "run one study over several schemes side by side"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="TOML config file")
        p.add_argument("--preset", choices=PRESET_NAMES, help="built-in study")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--cache", type=Path, default=Path(".ewinlse-cache"),
                       help="reference cache directory")
        p.add_argument("--threads", default="1", help="worker count or 'auto'")
        p.add_argument("--self-test", action="store_true",
                       help="fit synthetic geometric data instead of running solvers")
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
        return _cmd_compare(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"blow-up at step {exc.step_index}", file=sys.stderr)
        return EXIT_BLOWUP


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def _load_toml(path: Path) -> dict:
    if path is None:
        raise ConfigurationError("missing required key: --config (or --preset)")
    try:
        with open(path, "rb") as fh:
            return _toml.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except _toml.TOMLDecodeError as exc:
        raise ConfigurationError(f"config parse error: {exc}")


def _check_keys(section: dict, allowed: set, where: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigurationError(f"unknown config key: {where}{key}")


def _need(section: dict, key: str, where: str = ""):
    if key not in section:
        raise ConfigurationError(f"missing required key: {where}{key}")
    return section[key]


def _parse_potential(p: dict) -> Potential:
    kind = p.get("potential", "none")
    if kind == "none":
        return Potential.none()
    if kind == "box":
        return Potential.box(_need(p, "depth", "problem."),
                             _need(p, "left", "problem."),
                             _need(p, "right", "problem."))
    if kind == "power":
        return Potential.power_law(_need(p, "gamma", "problem."))
    if kind == "constant":
        return Potential.constant(_need(p, "value", "problem."))
    raise ConfigurationError(f"unknown potential kind {kind!r}")


def _parse_nonlinearity(p: dict) -> Nonlinearity:
    kind = p.get("nonlinearity", "none")
    if kind == "none":
        return Nonlinearity.none()
    if kind == "power":
        return Nonlinearity.power(_need(p, "lambda", "problem."),
                                  _need(p, "sigma", "problem."))
    if kind == "two_power":
        return Nonlinearity.two_power(
            _need(p, "lambda", "problem."), _need(p, "sigma", "problem."),
            _need(p, "lambda2", "problem."), _need(p, "sigma2", "problem."))
    if kind == "log_power":
        return Nonlinearity.log_power(_need(p, "lambda", "problem."),
                                      _need(p, "sigma", "problem."))
    raise ConfigurationError(f"unknown nonlinearity kind {kind!r}")


def _parse_datum(p: dict) -> Datum:
    name = _need(p, "datum", "problem.")
    if name == "plane_wave":
        return Datum.plane_wave(p.get("amplitude", 1.0), p.get("mode", 1))
    if name in ("type1_h2", "type2_smooth", "h3_datum"):
        return Datum(name)
    raise ConfigurationError(f"unknown initial datum {name!r}")


def _parse_band(text: str):
    parts = text.split(":")
    try:
        kind = parts[0]
        if kind == "slope":
            lo = None if parts[3] in ("-", "") else float(parts[3])
            hi = None if parts[4] in ("-", "") else float(parts[4])
            return SlopeBand(parts[1], parts[2], lo, hi)
        if kind == "gap":
            return GapBand(parts[1], parts[2], parts[3], float(parts[4]))
        if kind == "error_ratio":
            return ErrorRatioBand(parts[1], parts[2], parts[3], float(parts[4]))
        if kind == "fluctuation":
            return FluctuationBand(parts[1], parts[2], parts[3], float(parts[4]))
    except (IndexError, ValueError):
        pass
    raise ConfigurationError(
        f"malformed band {text!r} (e.g. 'slope:ewi_efp:L2:0.8:1.2')"
    )


def _study_from_config(cfg: dict, default_label: str) -> StudySpec:
    _check_keys(cfg, _TOP_KEYS_STUDY, "")
    problem = _need(cfg, "problem")
    _check_keys(problem, _PROBLEM_KEYS, "problem.")
    sweep = _need(cfg, "sweep")
    _check_keys(sweep, _SWEEP_KEYS, "sweep.")
    reference = _need(cfg, "reference")
    _check_keys(reference, _REFERENCE_KEYS, "reference.")
    kind = _need(sweep, "kind", "sweep.")
    if kind not in ("tau", "h"):
        raise ConfigurationError(f"sweep.kind must be 'tau' or 'h', got {kind!r}")
    values = tuple(float(v) for v in _need(sweep, "values", "sweep."))
    return StudySpec(
        label=cfg.get("label", default_label),
        a=float(problem.get("a", -16.0)),
        b=float(problem.get("b", 16.0)),
        T=float(_need(problem, "T", "problem.")),
        potential=_parse_potential(problem),
        nonlinearity=_parse_nonlinearity(problem),
        datum=_parse_datum(problem),
        schemes=tuple(_need(cfg, "schemes")),
        sweep=kind,
        taus=values if kind == "tau" else (),
        hs=values if kind == "h" else (),
        reference=RefSpec(
            _need(reference, "scheme", "reference."),
            float(_need(reference, "tau", "reference.")),
            float(_need(reference, "h", "reference.")),
        ),
        norms=tuple(cfg.get("norms", ("L2", "H1"))),
        fs_oversample=int(cfg.get("fs_oversample", 16)),
        bands=tuple(_parse_band(b) for b in cfg.get("bands", [])),
    )


def _resolve_threads(arg: str, n_points: int) -> int:
    if arg == "auto":
        return max(1, min(os.cpu_count() or 1, n_points))
    try:
        n = int(arg)
    except ValueError:
        raise ConfigurationError(f"--threads must be an integer or 'auto', got {arg!r}")
    if n < 1:
        raise ConfigurationError(f"--threads must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _cmd_solve(args) -> int:
    cfg = _load_toml(args.config)
    _check_keys(cfg, _TOP_KEYS_SOLVE, "")
    problem = _need(cfg, "problem")
    _check_keys(problem, _PROBLEM_KEYS, "problem.")
    scheme = _need(cfg, "scheme")
    tau = float(_need(cfg, "tau"))
    N = int(_need(cfg, "N"))
    label = cfg.get("label", args.config.stem)
    grid = PeriodicGrid(float(problem.get("a", -16.0)), float(problem.get("b", 16.0)), N)
    potential = _parse_potential(problem)
    nonlinearity = _parse_nonlinearity(problem)
    datum = _parse_datum(problem)
    fs_oversample = int(cfg.get("fs_oversample", 16))

    run = SchemeConfig(scheme, tau, float(_need(problem, "T", "problem.")), grid,
                       potential, nonlinearity, fs_oversample)
    psi0 = initial_field(datum.function(grid.a, grid.b), grid, scheme, fs_oversample)
    mass0 = grid.h * float(np.sum(np.abs(nodal_values(psi0)) ** 2))
    state = evolve(run, psi0)
    nodal = nodal_values(state.field)
    mass1 = grid.h * float(np.sum(np.abs(nodal) ** 2))

    args.out.mkdir(parents=True, exist_ok=True)
    snap = args.out / f"{label}.ref"
    write_field(snap, state.field, T=run.T, scheme=scheme, tau=tau)
    table = args.out / f"{label}_field.csv"
    rows = ["x,re,im,density"]
    vals = np.concatenate([nodal, nodal[:1]])
    for x, v in zip(grid.nodes, vals):
        rows.append(f"{x!r},{v.real!r},{v.imag!r},{abs(v)**2!r}")
    table.write_text("\n".join(rows) + "\n")

    print(f"mass t=0: {mass0:.15e}")
    print(f"mass t={run.T:g}: {mass1:.15e}")
    print(f"wrote {snap} and {table}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# convergence / compare
# ---------------------------------------------------------------------------


def _self_test(args) -> int:
    """Fit exact geometric data; the harness must read back the slopes."""
    steps = [1e-1, 5e-2, 2.5e-2]
    series = {
        ("synthetic", "L2"): OrderFit(0.0, ()),
        ("synthetic", "H1"): OrderFit(0.0, ()),
    }
    first = fit_order([(s, 0.1 * (s / steps[0])) for s in steps])
    second = fit_order([(s, 0.1 * (s / steps[0]) ** 2) for s in steps])
    series[("synthetic", "L2")] = first
    series[("synthetic", "H1")] = second
    print("self-test fitted orders:")
    print(f"  L2 slope {first.slope:.12f} per-interval {list(first.per_interval)}")
    print(f"  H1 slope {second.slope:.12f} per-interval {list(second.per_interval)}")
    bands = []
    if args.config is not None:
        cfg = _load_toml(args.config)
        _check_keys(cfg, {"bands", "label"}, "")
        bands = [_parse_band(b) for b in cfg.get("bands", [])]
    if not bands:
        bands = [SlopeBand("synthetic", "L2", 1.0 - 1e-9, 1.0 + 1e-9),
                 SlopeBand("synthetic", "H1", 2.0 - 1e-9, 2.0 + 1e-9)]
    ok = True
    for band in bands:
        fit = series.get((band.scheme, band.norm)) if isinstance(band, SlopeBand) else None
        if fit is None:
            ok = False
            print(f"  band {band}: FAIL (no such series)")
            continue
        passed = ((band.lo is None or fit.slope >= band.lo)
                  and (band.hi is None or fit.slope <= band.hi))
        ok = ok and passed
        print(f"  band {band.scheme}/{band.norm} [{band.lo}, {band.hi}]: "
              f"{'pass' if passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_BANDS


def _run_studies(args, studies, csv_name: str, verify_ref: bool = False) -> int:
    n_points = max(len(s.schemes) * len(s.sweep_points()) for s in studies)
    workers = _resolve_threads(args.threads, n_points)
    args.out.mkdir(parents=True, exist_ok=True)
    args.cache.mkdir(parents=True, exist_ok=True)
    log = lambda msg: print(msg, flush=True)
    results = [
        run_study(spec, cache_dir=args.cache, workers=workers, log=log,
                  verify_ref=verify_ref)
        for spec in studies
    ]
    csv_path = args.out / csv_name
    write_csv(results, csv_path)
    print(f"wrote {csv_path}")

    print(f"{'study':<28} {'scheme':<12} {'norm':<4} {'slope':>8}  "
          f"{'err@finest':>11}  flags / per-interval")
    all_ok = True
    for result in results:
        for fit in result.fits:
            slope = "  --  " if fit.slope is None else f"{fit.slope:8.3f}"
            err = " " * 11 if fit.error_at_finest is None else f"{fit.error_at_finest:11.3e}"
            intervals = ",".join(f"{o:.2f}" for o in fit.per_interval)
            flags = ";".join(fit.flags)
            print(f"{result.spec.label:<28} {fit.scheme:<12} {fit.norm:<4} {slope}  "
                  f"{err}  {flags} [{intervals}]")
        for check in evaluate_bands(result):
            status = "pass" if check.passed else "FAIL"
            all_ok = all_ok and check.passed
            print(f"  band {type(check.band).__name__}: {status} ({check.detail})")
    return EXIT_OK if all_ok else EXIT_BANDS


def _collect_studies(args):
    if args.preset:
        return preset_studies(args.preset), False
    cfg = _load_toml(args.config)
    studies = [_study_from_config(cfg, args.config.stem)]
    return studies, bool(cfg.get("verify_reference", False))


def _cmd_convergence(args) -> int:
    if args.self_test:
        return _self_test(args)
    studies, verify_ref = _collect_studies(args)
    name = (args.preset or args.config.stem) + ".csv"
    return _run_studies(args, studies, name, verify_ref)


def _cmd_compare(args) -> int:
    if args.self_test:
        return _self_test(args)
    studies, verify_ref = _collect_studies(args)
    for spec in studies:
        if len(spec.schemes) < 2:
            raise ConfigurationError(
                f"compare needs at least two schemes, study {spec.label!r} "
                f"has {list(spec.schemes)}"
            )
    name = (args.preset or args.config.stem) + ".csv"
    return _run_studies(args, studies, name, verify_ref)


if __name__ == "__main__":
    sys.exit(main())
