"""Convergence studies: reference solutions, error sweeps and order fits.

A study fixes one problem (domain, potential, nonlinearity, initial datum,
final time), sweeps either the time step (mesh fixed at the reference mesh) or
the mesh (time step fixed at the reference step), measures errors against a
cached reference trajectory in the L2 and H1 norms, and fits convergence
orders on log-log axes.  Reference fields are persisted in a binary `.ref`
format with a content hash so corrupt or stale files are detected and
recomputed rather than trusted.
"""

from __future__ import annotations

import hashlib
import multiprocessing
import os
import tempfile
import time
import uuid
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace as _dc_replace
from pathlib import Path

import numpy as np

from .errors import CacheError, ConfigurationError, FitError
from .integrators import SCHEMES, SchemeConfig, evolve, initial_field
from .physics import Nonlinearity, Potential
from .spectral import PeriodicGrid, SpectralField, sobolev_norm, zero_pad

__all__ = [
    "ERROR_FLOOR",
    "CSV_COLUMNS",
    "Datum",
    "RefSpec",
    "SlopeBand",
    "GapBand",
    "ErrorRatioBand",
    "FluctuationBand",
    "StudySpec",
    "ErrorRecord",
    "OrderFit",
    "SeriesFit",
    "StudyResult",
    "BandCheck",
    "write_field",
    "read_field",
    "compute_reference",
    "error_against_reference",
    "fit_order",
    "per_interval_orders",
    "run_study",
    "evaluate_bands",
    "write_csv",
]

ERROR_FLOOR = 1e-10

CSV_COLUMNS = (
    "study_label", "scheme", "potential", "nonlinearity", "datum",
    "norm", "tau", "h", "error", "order_local", "blown_up", "wall_seconds",
)

_NORM_ALPHA = {"L2": 0.0, "H1": 1.0}


@dataclass(frozen=True)
class Datum:
    """Initial data by id: fixed closed forms plus plane waves and customs."""

    id: str
    amplitude: float = 1.0
    mode: int = 1
    fn: object = None
    token: str = ""

    @classmethod
    def type1(cls) -> "Datum":
        """H^2 datum x|x|^0.51 exp(-x^2/2)."""
        return cls("type1_h2")

    @classmethod
    def type2(cls) -> "Datum":
        """Smooth datum x exp(-x^2/2)."""
        return cls("type2_smooth")

    @classmethod
    def h3(cls) -> "Datum":
        """H^3 datum (1+|x|^2.51) exp(-x^2/2)."""
        return cls("h3_datum")

    @classmethod
    def plane_wave(cls, amplitude: float = 1.0, mode: int = 1) -> "Datum":
        return cls("plane_wave", amplitude=float(amplitude), mode=int(mode))

    @classmethod
    def custom(cls, fn) -> "Datum":
        return cls("custom", fn=fn, token=uuid.uuid4().hex)

    def function(self, a: float, b: float):
        if self.id == "type1_h2":
            return lambda x: (x * np.abs(x) ** 0.51 * np.exp(-(x**2) / 2)).astype(complex)
        if self.id == "type2_smooth":
            return lambda x: (x * np.exp(-(x**2) / 2)).astype(complex)
        if self.id == "h3_datum":
            return lambda x: ((1 + np.abs(x) ** 2.51) * np.exp(-(x**2) / 2)).astype(complex)
        if self.id == "plane_wave":
            mu = 2.0 * np.pi * self.mode / (b - a)
            return lambda x: self.amplitude * np.exp(1j * mu * (x - a))
        if self.id == "custom":
            return self.fn
        raise ConfigurationError(f"unknown initial datum {self.id!r}")

    def describe(self) -> str:
        if self.id == "plane_wave":
            return f"plane_wave({self.amplitude:g};{self.mode})"
        return self.id

    def cache_token(self) -> str:
        return self.token if self.id == "custom" else self.describe()


@dataclass(frozen=True)
class RefSpec:
    """Reference trajectory: scheme (or "self"), time step and mesh size."""

    scheme: str
    tau: float
    h: float

    def __post_init__(self):
        if self.scheme not in SCHEMES and self.scheme != "self":
            raise ConfigurationError(f"unknown reference scheme {self.scheme!r}")
        if self.tau <= 0 or self.h <= 0:
            raise ConfigurationError("reference tau and h must be positive")


@dataclass(frozen=True)
class SlopeBand:
    """Fitted slope of (scheme, norm) must land inside [lo, hi]."""

    scheme: str
    norm: str
    lo: float | None = None
    hi: float | None = None


@dataclass(frozen=True)
class GapBand:
    """Slope(scheme_hi) - slope(scheme_lo) must be at least min_gap."""

    scheme_hi: str
    scheme_lo: str
    norm: str
    min_gap: float


@dataclass(frozen=True)
class ErrorRatioBand:
    """error(scheme_num) <= max_ratio * error(scheme_den) at the finest point."""

    scheme_num: str
    scheme_den: str
    norm: str
    max_ratio: float


@dataclass(frozen=True)
class FluctuationBand:
    """std of per-interval orders of scheme_noisy >= min_ratio * that of scheme_smooth."""

    scheme_noisy: str
    scheme_smooth: str
    norm: str
    min_ratio: float


@dataclass(frozen=True)
class StudySpec:
    """One convergence study: problem, sweep, reference and acceptance bands."""

    label: str
    a: float
    b: float
    T: float
    potential: Potential
    nonlinearity: Nonlinearity
    datum: Datum
    schemes: tuple
    sweep: str  # "tau" or "h"
    reference: RefSpec
    taus: tuple = ()
    hs: tuple = ()
    norms: tuple = ("L2", "H1")
    fs_oversample: int = 16
    bands: tuple = ()

    def __post_init__(self):
        if self.sweep not in ("tau", "h"):
            raise ConfigurationError(f"sweep must be 'tau' or 'h', got {self.sweep!r}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigurationError(f"duplicate scheme in {self.schemes}")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigurationError(f"unknown scheme {s!r}")
        for n in self.norms:
            if n not in _NORM_ALPHA:
                raise ConfigurationError(f"unknown norm {n!r} (use L2/H1)")
        steps = self.taus if self.sweep == "tau" else self.hs
        if len(steps) < 1:
            raise ConfigurationError(f"empty {self.sweep} sweep")
        if any(s2 >= s1 for s1, s2 in zip(steps, steps[1:])):
            raise ConfigurationError("sweep steps must be strictly decreasing")
        if self.sweep == "tau":
            if self.reference.tau > min(self.taus) / 10:
                raise ConfigurationError(
                    "reference tau must be at least 10x finer than the sweep"
                )
            for tau in self.taus:
                _check_divides(self.T, tau)
        else:
            if self.reference.h > min(self.hs) / 2:
                raise ConfigurationError(
                    "reference h must be at least 2x finer than the sweep"
                )
            for h in self.hs:
                self.grid_for(h)
        _check_divides(self.T, self.reference.tau)
        self.grid_for(self.reference.h)
        self.potential.validate_domain(self.a, self.b)

    def grid_for(self, h: float) -> PeriodicGrid:
        n_float = (self.b - self.a) / h
        N = round(n_float)
        if abs(n_float - N) > 1e-9 * N or N % 2 != 0 or N < 4:
            raise ConfigurationError(
                f"mesh size {h} does not give an even integer point count on "
                f"({self.a}, {self.b})"
            )
        return PeriodicGrid(self.a, self.b, N)

    def sweep_points(self):
        """(tau, h) pairs in sweep order, the fixed parameter filled in."""
        if self.sweep == "tau":
            return [(tau, self.reference.h) for tau in self.taus]
        return [(self.reference.tau, h) for h in self.hs]

    def problem_key(self) -> str:
        return "|".join([
            repr(float(self.a)), repr(float(self.b)), repr(float(self.T)),
            self.potential.describe(), self.nonlinearity.describe(),
            self.datum.cache_token(),
        ])


def _check_divides(T: float, tau: float) -> None:
    n = round(T / tau)
    if n < 1 or abs(T - n * tau) > 1e-9 * T:
        raise ConfigurationError(f"time step {tau} does not divide T={T}")


@dataclass(frozen=True)
class ErrorRecord:
    """One (scheme, tau, h, norm) measurement."""

    scheme: str
    norm: str
    tau: float
    h: float
    error: float | None
    t_final: float
    wall_seconds: float
    blown_up_step: int | None = None
    order_local: float | None = None

    @property
    def usable(self) -> bool:
        return (self.blown_up_step is None and self.error is not None
                and np.isfinite(self.error) and self.error > 0)


@dataclass(frozen=True)
class OrderFit:
    slope: float
    per_interval: tuple


@dataclass(frozen=True)
class SeriesFit:
    """Fitted orders for one (scheme, norm) series, with exclusion flags."""

    scheme: str
    norm: str
    slope: float | None
    per_interval: tuple
    n_used: int
    error_at_finest: float | None
    flags: tuple


@dataclass
class StudyResult:
    spec: StudySpec
    records: list
    fits: list
    csv_path: Path | None = None

    def fit_for(self, scheme: str, norm: str) -> SeriesFit | None:
        for f in self.fits:
            if f.scheme == scheme and f.norm == norm:
                return f
        return None


@dataclass(frozen=True)
class BandCheck:
    band: object
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# reference snapshot format: 64-byte text header, interleaved little-endian
# re/im float64 pairs in natural mode order, trailing sha256 of the rest
# ---------------------------------------------------------------------------

_REF_MAGIC = "EWIREF1"
_HEADER_LEN = 64
_HASH_LEN = 32


def write_field(path, field: SpectralField, T: float, scheme: str, tau: float) -> None:
    path = Path(path)
    g = field.grid
    header = (
        f"{_REF_MAGIC} N={g.N} a={float(g.a)!r} b={float(g.b)!r} "
        f"T={float(T)!r} s={scheme} tau={float(tau)!r}"
    ).encode("ascii")
    if len(header) > _HEADER_LEN:
        raise ConfigurationError("snapshot header exceeds 64 bytes")
    header = header.ljust(_HEADER_LEN)
    payload = np.ascontiguousarray(field.coeffs, dtype="<c16").tobytes()
    digest = hashlib.sha256(header + payload).digest()
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header + payload + digest)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_field(path):
    """Load a `.ref` snapshot, returning (field, meta).  Raises CacheError."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER_LEN + _HASH_LEN:
        raise CacheError(f"{path}: truncated snapshot")
    header, payload, digest = raw[:_HEADER_LEN], raw[_HEADER_LEN:-_HASH_LEN], raw[-_HASH_LEN:]
    if hashlib.sha256(header + payload).digest() != digest:
        raise CacheError(f"{path}: content hash mismatch")
    tokens = header.decode("ascii", errors="replace").split()
    if not tokens or tokens[0] != _REF_MAGIC:
        raise CacheError(f"{path}: bad magic")
    try:
        kv = dict(tok.split("=", 1) for tok in tokens[1:])
        meta = {
            "N": int(kv["N"]),
            "a": float(kv["a"]),
            "b": float(kv["b"]),
            "T": float(kv["T"]),
            "scheme": kv["s"],
            "tau": float(kv["tau"]),
        }
    except (KeyError, ValueError) as exc:
        raise CacheError(f"{path}: malformed header") from exc
    if len(payload) != 16 * meta["N"]:
        raise CacheError(f"{path}: payload length does not match N={meta['N']}")
    coeffs = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    grid = PeriodicGrid(meta["a"], meta["b"], meta["N"])
    return SpectralField(grid, coeffs), meta


def _reference_path(spec: StudySpec, scheme: str, cache_dir) -> Path:
    from .physics import QUADRATURE_OVERSAMPLE

    N_ref = spec.grid_for(spec.reference.h).N
    key_src = "|".join([
        spec.problem_key(), scheme, repr(float(spec.reference.tau)),
        str(N_ref), str(spec.fs_oversample), f"q{QUADRATURE_OVERSAMPLE}",
    ])
    key = hashlib.sha256(key_src.encode()).hexdigest()[:24]
    return Path(cache_dir) / f"{key}.ref"


def compute_reference(spec: StudySpec, cache_dir, scheme: str | None = None) -> SpectralField:
    """Reference field at t = T, loaded from cache when the snapshot verifies.

    A corrupt or mismatched cache file is reported and recomputed, never
    silently trusted.
    """
    scheme_r = scheme if scheme is not None else spec.reference.scheme
    if scheme_r == "self":
        raise ConfigurationError("a 'self' reference needs the scheme under test")
    grid = spec.grid_for(spec.reference.h)
    path = _reference_path(spec, scheme_r, cache_dir)
    if path.exists():
        try:
            fld, meta = read_field(path)
            if (meta["N"] != grid.N or meta["a"] != spec.a or meta["b"] != spec.b
                    or meta["T"] != spec.T or meta["scheme"] != scheme_r
                    or meta["tau"] != spec.reference.tau):
                raise CacheError(f"{path}: header does not match the requested reference")
            return fld
        except CacheError as exc:
            warnings.warn(f"reference cache invalid, recomputing: {exc}")
    psi0 = initial_field(spec.datum.function(spec.a, spec.b), grid, scheme_r,
                         spec.fs_oversample)
    cfg = SchemeConfig(scheme_r, spec.reference.tau, spec.T, grid,
                       spec.potential, spec.nonlinearity, spec.fs_oversample)
    state = evolve(cfg, psi0)
    write_field(path, state.field, T=spec.T, scheme=scheme_r, tau=spec.reference.tau)
    return state.field


def verify_reference(spec: StudySpec, cache_dir, scheme: str | None = None,
                     tol: float = 1e-8) -> float:
    """Self-consistency check: the reference against a (tau/2, 2N) run.

    Returns the L2 distance; raises CacheError when it exceeds tol, meaning
    the reference is not converged enough to dominate the sweep.  The finer
    run is cached like any other reference.
    """
    scheme_r = scheme if scheme is not None else spec.reference.scheme
    ref = compute_reference(spec, cache_dir, scheme_r)
    finer = _dc_replace(
        spec, reference=RefSpec(spec.reference.scheme, spec.reference.tau / 2,
                                spec.reference.h / 2))
    fine = compute_reference(finer, cache_dir, scheme_r)
    dist = error_against_reference(ref, fine, "L2")
    if dist > tol:
        raise CacheError(
            f"reference self-consistency failed: {dist:.3e} > {tol:.1e}"
        )
    return dist


def error_against_reference(psi: SpectralField, psi_ref: SpectralField, norm: str) -> float:
    """Zero-pad to the reference grid, subtract, and take the norm."""
    if norm not in _NORM_ALPHA:
        raise ConfigurationError(f"unknown norm {norm!r} (use L2/H1)")
    padded = zero_pad(psi, psi_ref.grid)
    diff = SpectralField(psi_ref.grid, padded.coeffs - psi_ref.coeffs)
    return sobolev_norm(diff, _NORM_ALPHA[norm])


def per_interval_orders(steps, errors):
    """ln(e_i/e_{i+1}) / ln(s_i/s_{i+1}) for consecutive points."""
    out = []
    for (s1, e1), (s2, e2) in zip(zip(steps, errors), zip(steps[1:], errors[1:])):
        out.append(float(np.log(e1 / e2) / np.log(s1 / s2)))
    return out


def fit_order(points) -> OrderFit:
    """Least-squares slope of ln(error) vs ln(step) plus per-interval orders.

    Points with error <= 0 are excluded with a warning; fewer than two usable
    points is a FitError.  Steps must be strictly decreasing.
    """
    points = list(points)
    if any(s2 >= s1 for (s1, _), (s2, _) in zip(points, points[1:])):
        raise FitError("steps must be strictly decreasing")
    usable = [(s, e) for s, e in points if e is not None and e > 0]
    if len(usable) < len(points):
        warnings.warn(f"excluded {len(points) - len(usable)} non-positive error points")
    if len(usable) < 2:
        raise FitError(f"need at least 2 usable points, have {len(usable)}")
    steps = [s for s, _ in usable]
    errors = [e for _, e in usable]
    slope = float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
    return OrderFit(slope, tuple(per_interval_orders(steps, errors)))


# ---------------------------------------------------------------------------
# study execution
# ---------------------------------------------------------------------------


def _execute_point(args):
    """Run one sweep point; returns (coeffs | None, blown_step | None, wall).

    Completed trajectories are cached in the same snapshot format as
    references, keyed by the full problem + discretization, so repeated
    studies (and the acceptance suite) only pay for each run once.
    """
    (scheme, tau, N, a, b, T, potential, nonlinearity, datum, fs_oversample,
     cache_dir) = args
    from .errors import BlowUpError
    from .physics import QUADRATURE_OVERSAMPLE

    path = None
    if cache_dir is not None:
        key_src = "|".join([
            repr(float(a)), repr(float(b)), repr(float(T)),
            potential.describe(), nonlinearity.describe(), datum.cache_token(),
            scheme, repr(float(tau)), str(N), str(fs_oversample),
            f"q{QUADRATURE_OVERSAMPLE}",
        ])
        key = hashlib.sha256(key_src.encode()).hexdigest()[:24]
        path = Path(cache_dir) / f"{key}.ref"
        if path.exists():
            try:
                fld, meta = read_field(path)
                if (meta["N"] == N and meta["a"] == a and meta["b"] == b
                        and meta["T"] == T and meta["scheme"] == scheme
                        and meta["tau"] == tau):
                    return fld.coeffs, None, 0.0
                raise CacheError(f"{path}: header mismatch")
            except CacheError as exc:
                warnings.warn(f"run cache invalid, recomputing: {exc}")

    grid = PeriodicGrid(a, b, N)
    psi0 = initial_field(datum.function(a, b), grid, scheme, fs_oversample)
    cfg = SchemeConfig(scheme, tau, T, grid, potential, nonlinearity, fs_oversample)
    t0 = time.perf_counter()
    try:
        state = evolve(cfg, psi0)
    except BlowUpError as exc:
        return None, exc.step_index, time.perf_counter() - t0
    if path is not None:
        write_field(path, state.field, T=T, scheme=scheme, tau=tau)
    return state.field.coeffs, None, time.perf_counter() - t0


def run_study(spec: StudySpec, cache_dir, out_csv=None, workers: int = 1,
              verify_ref: bool = False, log=None) -> StudyResult:
    """Execute every (scheme, sweep point), measure errors, fit orders.

    Individual blow-ups are recorded and the study continues.  Sweep points
    are independent and run on a process pool when workers > 1.
    """
    say = log or (lambda msg: None)
    refs = {}
    by_ref_scheme = {}
    for scheme in spec.schemes:
        ref_scheme = scheme if spec.reference.scheme == "self" else spec.reference.scheme
        if ref_scheme not in by_ref_scheme:
            say(f"[{spec.label}] reference: {ref_scheme} tau={spec.reference.tau:g} "
                f"h={spec.reference.h:g}")
            by_ref_scheme[ref_scheme] = compute_reference(spec, cache_dir, ref_scheme)
            if verify_ref:
                verify_reference(spec, cache_dir, ref_scheme)
        refs[scheme] = by_ref_scheme[ref_scheme]

    points = spec.sweep_points()
    tasks = [
        (scheme, tau, spec.grid_for(h).N, spec.a, spec.b, spec.T,
         spec.potential, spec.nonlinearity, spec.datum, spec.fs_oversample,
         Path(cache_dir))
        for scheme in spec.schemes for (tau, h) in points
    ]
    parallel = workers > 1 and spec.datum.id != "custom"
    if parallel:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            outcomes = list(pool.map(_execute_point, tasks))
    else:
        outcomes = []
        for task in tasks:
            say(f"[{spec.label}] run: {task[0]} tau={task[1]:g} N={task[2]}")
            outcomes.append(_execute_point(task))

    records = []
    idx = 0
    for scheme in spec.schemes:
        for (tau, h) in points:
            coeffs, blown_step, wall = outcomes[idx]
            idx += 1
            for norm in spec.norms:
                if blown_step is None:
                    grid = spec.grid_for(h)
                    err = error_against_reference(
                        SpectralField(grid, coeffs), refs[scheme], norm)
                else:
                    err = None
                records.append(ErrorRecord(
                    scheme=scheme, norm=norm, tau=tau, h=h, error=err,
                    t_final=spec.T, wall_seconds=wall, blown_up_step=blown_step))
    records = _attach_local_orders(spec, records)
    fits = [_fit_series(spec, records, scheme, norm)
            for scheme in spec.schemes for norm in spec.norms]
    result = StudyResult(spec, records, fits)
    if out_csv is not None:
        result.csv_path = Path(out_csv)
        write_csv([result], result.csv_path)
    return result


def _series(spec, records, scheme, norm):
    recs = [r for r in records if r.scheme == scheme and r.norm == norm]
    steps = [tau if spec.sweep == "tau" else h for (tau, h) in spec.sweep_points()]
    return steps, recs


def _attach_local_orders(spec, records):
    out = {id(r): r for r in records}
    for scheme in spec.schemes:
        for norm in spec.norms:
            steps, recs = _series(spec, records, scheme, norm)
            prev = None
            for step, rec in zip(steps, recs):
                if rec.usable and prev is not None:
                    p_step, p_rec = prev
                    order = float(np.log(p_rec.error / rec.error) / np.log(p_step / step))
                    out[id(rec)] = _dc_replace(rec, order_local=order)
                if rec.usable:
                    prev = (step, rec)
    # preserve original ordering
    return [out[id(r)] for r in records]


def _fit_series(spec, records, scheme, norm) -> SeriesFit:
    steps, recs = _series(spec, records, scheme, norm)
    flags = []
    if any(r.blown_up_step is not None for r in recs):
        flags.append("blow_up")
    usable = [(s, r.error) for s, r in zip(steps, recs) if r.usable]
    kept = [(s, e) for s, e in usable if e > ERROR_FLOOR]
    if len(kept) < len(usable):
        flags.append("floor")
    finest = usable[-1][1] if usable else None
    if len(kept) < 2:
        flags.append("too_few")
        return SeriesFit(scheme, norm, None, (), len(kept), finest, tuple(flags))
    if kept[0][1] <= kept[-1][1]:
        flags.append("monotonicity")
        return SeriesFit(scheme, norm, None,
                         tuple(per_interval_orders([s for s, _ in kept],
                                                   [e for _, e in kept])),
                         len(kept), finest, tuple(flags))
    fit = fit_order(kept)
    return SeriesFit(scheme, norm, fit.slope, fit.per_interval, len(kept),
                     finest, tuple(flags))


def write_csv(results, path) -> None:
    """Emit the fixed-schema CSV for one or more study results."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(CSV_COLUMNS)]
    for result in results:
        spec = result.spec
        for r in result.records:
            lines.append(",".join([
                spec.label, r.scheme, spec.potential.describe(),
                spec.nonlinearity.describe(), spec.datum.describe(), r.norm,
                repr(float(r.tau)), repr(float(r.h)),
                "" if r.error is None else repr(float(r.error)),
                "" if r.order_local is None else repr(float(r.order_local)),
                "" if r.blown_up_step is None else str(r.blown_up_step),
                f"{r.wall_seconds:.3f}",
            ]))
    path.write_text("\n".join(lines) + "\n")


def evaluate_bands(result: StudyResult) -> list:
    """Check every acceptance band of the study against the fitted series."""
    checks = []
    for band in result.spec.bands:
        if isinstance(band, SlopeBand):
            fit = result.fit_for(band.scheme, band.norm)
            if fit is None or fit.slope is None:
                flags = fit.flags if fit else ("missing",)
                checks.append(BandCheck(band, False, f"no usable fit ({','.join(flags)})"))
                continue
            ok = ((band.lo is None or fit.slope >= band.lo)
                  and (band.hi is None or fit.slope <= band.hi))
            checks.append(BandCheck(
                band, ok,
                f"slope {fit.slope:.3f} in [{band.lo}, {band.hi}]"))
        elif isinstance(band, GapBand):
            hi = result.fit_for(band.scheme_hi, band.norm)
            lo = result.fit_for(band.scheme_lo, band.norm)
            if not hi or not lo or hi.slope is None or lo.slope is None:
                checks.append(BandCheck(band, False, "no usable fits for gap"))
                continue
            gap = hi.slope - lo.slope
            checks.append(BandCheck(
                band, gap >= band.min_gap,
                f"gap {gap:.3f} (= {hi.slope:.3f} - {lo.slope:.3f}) >= {band.min_gap}"))
        elif isinstance(band, ErrorRatioBand):
            num = result.fit_for(band.scheme_num, band.norm)
            den = result.fit_for(band.scheme_den, band.norm)
            if (not num or not den or num.error_at_finest is None
                    or den.error_at_finest is None or den.error_at_finest == 0):
                checks.append(BandCheck(band, False, "missing finest-point errors"))
                continue
            ratio = num.error_at_finest / den.error_at_finest
            checks.append(BandCheck(
                band, ratio <= band.max_ratio,
                f"finest-error ratio {ratio:.3f} <= {band.max_ratio}"))
        elif isinstance(band, FluctuationBand):
            noisy = result.fit_for(band.scheme_noisy, band.norm)
            smooth = result.fit_for(band.scheme_smooth, band.norm)
            if (not noisy or not smooth or len(noisy.per_interval) < 2
                    or len(smooth.per_interval) < 2):
                checks.append(BandCheck(band, False, "not enough intervals"))
                continue
            s_noisy = float(np.std(noisy.per_interval))
            s_smooth = float(np.std(smooth.per_interval))
            ok = s_noisy >= band.min_ratio * s_smooth
            checks.append(BandCheck(
                band, ok,
                f"order std {s_noisy:.3f} vs {band.min_ratio} * {s_smooth:.3f}"))
        else:
            checks.append(BandCheck(band, False, f"unknown band type {type(band).__name__}"))
    return checks
