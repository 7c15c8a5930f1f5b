"""One-step propagators and time-stepping schemes for the periodic NLSE.

The model is i d/dt psi = -Lap psi + V psi + f(|psi|^2) psi.  The first-order
exponential integrator freezes the integrand of Duhamel's formula at t_n and
integrates the free factor exactly:

    psi^{n+1} = exp(i tau Lap) psi^n - i tau phi1(i tau Lap) (V psi^n + G(psi^n)),

with phi1(z) = (exp(z) - 1)/z acting diagonally in Fourier space.  Three
spatial realizations differ only in how the right-hand side is produced:

* ewi_fs   -- potential via the alias-free extended product, nonlinearity via
              oversampled projection (approximate P_N G).
* ewi_efp  -- potential via the extended product, nonlinearity by N-point
              collocation (the practical scheme).
* ewi_fp   -- nodal products for both terms (the aliasing-prone baseline).

lie_trotter and strang alternate the exact pointwise potential flow with the
exact free flow; strang is used to manufacture reference solutions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .errors import BlowUpError, ConfigurationError
from .physics import Nonlinearity, Potential, potential_coeffs
from .spectral import (
    GridField,
    PeriodicGrid,
    SpectralField,
    _pad_fft,
    _to_fft_order,
    _to_natural_order,
    _truncate_fft,
    dft,
    project,
)

__all__ = [
    "SCHEMES",
    "SchemeConfig",
    "SolverState",
    "free_flow",
    "phi1_multiplier",
    "ewi_fs_step",
    "ewi_efp_step",
    "ewi_fp_step",
    "lie_trotter_step",
    "strang_step",
    "evolve",
    "initial_field",
]

SCHEMES = ("ewi_fs", "ewi_efp", "ewi_fp", "lie_trotter", "strang")


@dataclass(frozen=True)
class SchemeConfig:
    """Everything needed to run one trajectory to time T."""

    scheme: str
    tau: float
    T: float
    grid: PeriodicGrid
    potential: Potential
    nonlinearity: Nonlinearity
    fs_oversample: int = 16

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if not 0 < self.tau < 1:
            raise ConfigurationError(f"time step must satisfy 0 < tau < 1, got {self.tau}")
        if self.T <= 0:
            raise ConfigurationError(f"final time must be positive, got {self.T}")
        n = round(self.T / self.tau)
        if n < 1 or abs(self.T - n * self.tau) > 1e-9 * self.T:
            raise ConfigurationError(
                f"T/tau = {self.T / self.tau!r} is not an integer to 1e-9 relative"
            )
        self.potential.validate_domain(self.grid.a, self.grid.b)

    @property
    def n_steps(self) -> int:
        return round(self.T / self.tau)


@dataclass(frozen=True)
class SolverState:
    """The iterate after step_index steps, plus a timing diagnostic."""

    step_index: int
    field: SpectralField
    wall_time_per_step: float = 0.0


def _phi1_of_theta(theta: np.ndarray) -> np.ndarray:
    """phi1(-i theta) = (1 - exp(-i theta))/(i theta), stable for small theta.

    Uses the identity phi1(-i theta) = exp(-i theta/2) * sin(theta/2)/(theta/2),
    which avoids cancellation and gives exactly 1 at theta = 0.
    """
    return np.exp(-0.5j * theta) * np.sinc(theta / (2.0 * np.pi))


def free_flow(c: SpectralField, t: float) -> SpectralField:
    """exp(i t Lap): multiply mode l by exp(-i t mu_l^2).  An L2 isometry."""
    return SpectralField(c.grid, np.exp(-1j * t * c.grid.mu**2) * c.coeffs)


def phi1_multiplier(c: SpectralField, tau: float) -> SpectralField:
    """phi1(i tau Lap): mode l gains the factor phi1(-i tau mu_l^2).

    The zero mode passes through unchanged; |phi1(i theta)| <= 1 makes this a
    contraction in every H^alpha norm.
    """
    if tau <= 0:
        raise ConfigurationError(f"tau must be positive, got {tau}")
    return SpectralField(c.grid, _phi1_of_theta(tau * c.grid.mu**2) * c.coeffs)


class Stepper:
    """Precomputed one-step propagator working on FFT-ordered coefficients.

    Multipliers and nodal potential tables are computed once; step/run then
    cost a handful of transforms per step.  tau may be negative (used by the
    time-reversibility checks of the splitting schemes).
    """

    def __init__(
        self,
        scheme: str,
        tau: float,
        grid: PeriodicGrid,
        potential: Potential,
        nonlinearity: Nonlinearity,
        fs_oversample: int = 16,
    ):
        if scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {scheme!r}")
        potential.validate_domain(grid.a, grid.b)
        self.scheme = scheme
        self.tau = tau
        self.grid = grid
        self.potential = potential
        self.nonlinearity = nonlinearity
        self.fs_oversample = fs_oversample

        N = grid.N
        mu2 = grid.mu_fft() ** 2
        self._free = np.exp(-1j * tau * mu2)
        self._phi1 = _phi1_of_theta(tau * mu2)

        self._v_nodes = None      # nodal V for fp / splitting schemes
        self._v_nodes_4n = None   # nodal P_2N(V) on the 4N grid for fs / efp
        self._pad4 = None
        self._padq = None
        if not potential.is_none:
            if scheme in ("ewi_fs", "ewi_efp"):
                table = potential_coeffs(potential, grid, 2 * N)
                padded = _pad_fft(_to_fft_order(table.coeffs), 4 * N)
                self._v_nodes_4n = _fft.ifft(padded, norm="forward")
            else:
                self._v_nodes = potential.evaluate(grid.nodes[:-1], grid.a, grid.b)
        if scheme in ("ewi_fs", "ewi_efp") and not potential.is_none:
            self._pad4 = np.zeros(4 * N, dtype=np.complex128)
        if scheme == "ewi_fs" and not nonlinearity.is_none:
            self._padq = np.zeros(fs_oversample * N, dtype=np.complex128)
        if scheme in ("lie_trotter", "strang") and potential.is_none:
            self._v_nodes = np.zeros(N)

    # -- EWI family ------------------------------------------------------

    def _rhs_ewi(self, c: np.ndarray) -> np.ndarray:
        """Spatial realization of P_N(V psi + G(psi)) in FFT order."""
        N = self.grid.N
        rhs = None
        if self._v_nodes_4n is not None:
            # alias-free potential product on the extended 4N grid
            self._pad4[: N // 2] = c[: N // 2]
            self._pad4[-N // 2 :] = c[N // 2 :]
            prod = _fft.ifft(self._pad4, norm="forward")
            prod *= self._v_nodes_4n
            rhs = _truncate_fft(_fft.fft(prod, norm="forward"), N)
        collocate_nl = not self.nonlinearity.is_none and self.scheme != "ewi_fs"
        if collocate_nl or self._v_nodes is not None:
            nodal = _fft.ifft(c, norm="forward")
            g = self._v_nodes * nodal if self._v_nodes is not None else None
            if collocate_nl:
                gn = self.nonlinearity.G(nodal)
                g = gn if g is None else g + gn
            term = _fft.fft(g, norm="forward")
            rhs = term if rhs is None else rhs + term
        if self.scheme == "ewi_fs" and not self.nonlinearity.is_none:
            # projected nonlinearity: evaluate on the oversampled grid, truncate
            self._padq[: N // 2] = c[: N // 2]
            self._padq[-N // 2 :] = c[N // 2 :]
            g = self.nonlinearity.G(_fft.ifft(self._padq, norm="forward"))
            term = _truncate_fft(_fft.fft(g, norm="forward"), N)
            rhs = term if rhs is None else rhs + term
        return rhs

    def _step_ewi(self, c: np.ndarray) -> np.ndarray:
        rhs = self._rhs_ewi(c)
        out = self._free * c
        if rhs is not None:
            out -= (1j * self.tau) * (self._phi1 * rhs)
        return out

    # -- splitting family --------------------------------------------------

    def _pot_phase(self, w: np.ndarray, dt: float) -> np.ndarray:
        """exp(-i dt (V + f(|w|^2))) at the nodes; |w| is invariant under it."""
        if self.nonlinearity.is_none:
            arg = self._v_nodes
        else:
            arg = self._v_nodes + self.nonlinearity.f(w.real**2 + w.imag**2)
        return np.exp((-1j * dt) * arg)

    def _run_splitting(self, c: np.ndarray, n_steps: int, start_index: int) -> np.ndarray:
        if self.scheme == "lie_trotter":
            for k in range(n_steps):
                w = _fft.ifft(c, norm="forward")
                w *= self._pot_phase(w, self.tau)
                c = _fft.fft(w, norm="forward")
                c *= self._free
                if not np.isfinite(c).all():
                    raise BlowUpError(start_index + k + 1)
            return c
        # strang: merge the trailing and leading half-potential flows of
        # adjacent steps; the state at the end of the run is exact
        w = _fft.ifft(c, norm="forward")
        w = w * self._pot_phase(w, 0.5 * self.tau)
        for k in range(n_steps):
            c = _fft.fft(w, norm="forward")
            c *= self._free
            w = _fft.ifft(c, norm="forward")
            dt = 0.5 * self.tau if k == n_steps - 1 else self.tau
            w *= self._pot_phase(w, dt)
            if not np.isfinite(w).all():
                raise BlowUpError(start_index + k + 1)
        return _fft.fft(w, norm="forward")

    def run(self, c: np.ndarray, n_steps: int, start_index: int = 0) -> np.ndarray:
        """Advance n_steps from FFT-ordered coefficients c; exact at the end.

        Raises BlowUpError carrying the absolute index of the failing step.
        """
        if n_steps == 0:
            return c.copy()
        with np.errstate(over="ignore", invalid="ignore"):
            if self.scheme in ("lie_trotter", "strang"):
                return self._run_splitting(c, n_steps, start_index)
            for k in range(n_steps):
                c = self._step_ewi(c)
                if not np.isfinite(c).all():
                    raise BlowUpError(start_index + k + 1)
        return c


def _stepper_from(cfg: SchemeConfig, scheme: str) -> Stepper:
    return Stepper(scheme, cfg.tau, cfg.grid, cfg.potential, cfg.nonlinearity,
                   cfg.fs_oversample)


def _single_step(scheme: str, state: SolverState, cfg: SchemeConfig) -> SolverState:
    stepper = _stepper_from(cfg, scheme)
    c = stepper.run(_to_fft_order(state.field.coeffs), 1, start_index=state.step_index)
    return SolverState(state.step_index + 1, SpectralField(cfg.grid, _to_natural_order(c)))


def ewi_fs_step(state: SolverState, cfg: SchemeConfig) -> SolverState:
    """One step of the Fourier-spectral realization (projected nonlinearity)."""
    return _single_step("ewi_fs", state, cfg)


def ewi_efp_step(state: SolverState, cfg: SchemeConfig) -> SolverState:
    """One step of the extended pseudospectral realization."""
    return _single_step("ewi_efp", state, cfg)


def ewi_fp_step(state: SolverState, cfg: SchemeConfig) -> SolverState:
    """One step of the standard pseudospectral realization (nodal potential)."""
    return _single_step("ewi_fp", state, cfg)


def lie_trotter_step(state: SolverState, cfg: SchemeConfig) -> SolverState:
    """Pointwise potential flow followed by the exact free flow."""
    return _single_step("lie_trotter", state, cfg)


def strang_step(state: SolverState, cfg: SchemeConfig) -> SolverState:
    """Symmetric half-potential / free / half-potential step."""
    return _single_step("strang", state, cfg)


def evolve(cfg: SchemeConfig, psi0: SpectralField, observer=None,
           observer_stride: int | None = None) -> SolverState:
    """March psi0 to t = T with cfg.scheme, returning the final state.

    The observer, if given, is called as observer(n, field) every
    observer_stride steps (default max(1, n_steps//100)) and at the final
    step.  BlowUpError propagates with the failing step index.
    """
    if psi0.grid.N != cfg.grid.N or not psi0.grid.same_domain(cfg.grid):
        raise ConfigurationError("initial field does not live on the configured grid")
    n_total = cfg.n_steps
    stride = observer_stride if observer_stride else max(1, n_total // 100)
    stepper = _stepper_from(cfg, cfg.scheme)
    c = _to_fft_order(psi0.coeffs).copy()
    t0 = time.perf_counter()
    done = 0
    while done < n_total:
        chunk = min(stride, n_total - done) if observer else n_total - done
        c = stepper.run(c, chunk, start_index=done)
        done += chunk
        if observer:
            observer(done, SpectralField(cfg.grid, _to_natural_order(c)))
    wall = (time.perf_counter() - t0) / n_total
    return SolverState(n_total, SpectralField(cfg.grid, _to_natural_order(c)), wall)


def initial_field(f, grid: PeriodicGrid, scheme: str, fs_oversample: int = 16) -> SpectralField:
    """Scheme-matched discrete initial data.

    ewi_fs starts from the projection P_N psi0; the pseudospectral and
    splitting schemes start from nodal samples psi0(x_j) interpolated into X_N.
    """
    if scheme == "ewi_fs":
        return project(f, grid, fs_oversample)
    vals = np.asarray(f(grid.nodes[:-1]), dtype=np.complex128)
    return dft(GridField.from_samples(grid, vals))
