"""Potentials, nonlinearities and the combined operator B(v) = V v + f(|v|^2) v.

Potentials are real-valued on the periodic domain; their Fourier coefficient
tables (used by the alias-free potential product) are closed-form where
possible and oversampled quadrature otherwise.  Nonlinearities are the
power-law family f(rho) = lambda rho^sigma and its two-term and logarithmic
variants; all are real-valued on rho >= 0 with G(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .spectral import PeriodicGrid, SpectralField, dft, GridField, project, zero_pad
from . import spectral as _sp

__all__ = [
    "Potential",
    "Nonlinearity",
    "potential_coeffs",
    "apply_B",
]


@dataclass(frozen=True)
class Potential:
    """Real potential V(x), one of: none, box, power_law, constant, sampled.

    box(depth, left, right): depth on (left, right), 0 elsewhere; the edges
    must lie strictly inside the domain.  power_law(gamma): |x - midpoint|^gamma,
    which on a symmetric domain is |x|^gamma.  sampled: values on a uniform
    even-length grid over [a, b), evaluated elsewhere by trigonometric
    interpolation.
    """

    kind: str
    depth: float = 0.0
    left: float = 0.0
    right: float = 0.0
    gamma: float = 0.0
    value: float = 0.0
    samples: tuple = ()

    @classmethod
    def none(cls) -> "Potential":
        return cls("none")

    @classmethod
    def box(cls, depth: float, left: float, right: float) -> "Potential":
        if not left < right:
            raise ConfigurationError(f"box requires left < right, got ({left}, {right})")
        return cls("box", depth=float(depth), left=float(left), right=float(right))

    @classmethod
    def power_law(cls, gamma: float) -> "Potential":
        if gamma <= 0:
            raise ConfigurationError(f"power_law requires gamma > 0, got {gamma}")
        return cls("power_law", gamma=float(gamma))

    @classmethod
    def constant(cls, value: float) -> "Potential":
        return cls("constant", value=float(value))

    @classmethod
    def sampled(cls, values) -> "Potential":
        values = tuple(float(v) for v in np.asarray(values, dtype=np.float64))
        if len(values) < 4 or len(values) % 2 != 0:
            raise ConfigurationError("sampled potential needs an even number >= 4 of values")
        return cls("sampled", samples=values)

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    def validate_domain(self, a: float, b: float) -> None:
        if self.kind == "box" and not (a < self.left and self.right < b):
            raise ConfigurationError(
                f"box edges ({self.left}, {self.right}) must lie strictly inside ({a}, {b})"
            )

    def evaluate(self, x, a: float, b: float) -> np.ndarray:
        """Pointwise V(x) on arrays, used by nodal (pseudospectral) treatments."""
        xs = np.asarray(x, dtype=np.float64)
        if self.kind == "none":
            return np.zeros_like(xs)
        if self.kind == "constant":
            return np.full_like(xs, self.value)
        if self.kind == "box":
            return np.where((xs > self.left) & (xs < self.right), self.depth, 0.0)
        if self.kind == "power_law":
            return np.abs(xs - 0.5 * (a + b)) ** self.gamma
        if self.kind == "sampled":
            vals = np.asarray(self.samples, dtype=np.float64)
            grid = PeriodicGrid(a, b, len(vals))
            table = dft(GridField.from_samples(grid, vals.astype(np.complex128)))
            return np.real(_sp.evaluate(table, xs))
        raise ConfigurationError(f"unknown potential kind {self.kind!r}")

    def sup_norm(self, a: float, b: float) -> float:
        """A finite bound for ||V||_Linf, used in stability constants."""
        if self.kind == "none":
            return 0.0
        if self.kind == "constant":
            return abs(self.value)
        if self.kind == "box":
            return abs(self.depth)
        if self.kind == "power_law":
            half = 0.5 * (b - a)
            return half**self.gamma
        if self.kind == "sampled":
            return float(np.max(np.abs(self.samples)))
        raise ConfigurationError(f"unknown potential kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "constant":
            return f"constant({self.value:g})"
        if self.kind == "box":
            return f"box({self.depth:g};{self.left:g};{self.right:g})"
        if self.kind == "power_law":
            return f"power({self.gamma:g})"
        return f"sampled({len(self.samples)})"


QUADRATURE_OVERSAMPLE = 512


def potential_coeffs(V: Potential, grid: PeriodicGrid, modes: int,
                     oversample: int = QUADRATURE_OVERSAMPLE) -> SpectralField:
    """Fourier coefficients of V on T_M over the grid's domain.

    Box and constant potentials use the closed form; power_law and sampled
    kinds fall back to oversampled quadrature.  The table is computed once
    per run, so the factor is generous: |x|^gamma tails decay only like
    |l|^-(1+gamma) and third-order spatial studies need the table error well
    below 1e-7.
    """
    if modes % 2 != 0 or modes < 4:
        raise ConfigurationError(f"mode count must be even and >= 4, got {modes}")
    a, b = grid.a, grid.b
    V.validate_domain(a, b)
    table_grid = PeriodicGrid(a, b, modes)
    if V.kind == "none":
        return SpectralField.zero(table_grid)
    if V.kind == "constant":
        return SpectralField.pure_mode(table_grid, 0, V.value)
    if V.kind == "box":
        mu = table_grid.mu
        coeffs = np.empty(modes, dtype=np.complex128)
        nz = mu != 0
        coeffs[nz] = (
            V.depth
            / (b - a)
            * (np.exp(-1j * mu[nz] * (V.left - a)) - np.exp(-1j * mu[nz] * (V.right - a)))
            / (1j * mu[nz])
        )
        coeffs[~nz] = V.depth * (V.right - V.left) / (b - a)
        return SpectralField(table_grid, coeffs)
    return project(lambda xs: V.evaluate(xs, a, b).astype(np.complex128),
                   table_grid, oversample)


@dataclass(frozen=True)
class Nonlinearity:
    """Density-dependent interaction f(rho), with G(z) = f(|z|^2) z.

    Kinds: none; power (lambda * rho^sigma); two_power (two power terms with
    sigma2 > sigma1 > 0); log_power (lambda * rho^sigma * ln rho, extended
    continuously by 0 at rho = 0).
    """

    kind: str
    lam: float = 0.0
    sigma: float = 0.0
    lam2: float = 0.0
    sigma2: float = 0.0

    @classmethod
    def none(cls) -> "Nonlinearity":
        return cls("none")

    @classmethod
    def power(cls, lam: float, sigma: float) -> "Nonlinearity":
        if sigma <= 0:
            raise ConfigurationError(f"power requires sigma > 0, got {sigma}")
        return cls("power", lam=float(lam), sigma=float(sigma))

    @classmethod
    def cubic(cls, lam: float = -1.0) -> "Nonlinearity":
        return cls.power(lam, 1.0)

    @classmethod
    def two_power(cls, lam1: float, sigma1: float, lam2: float, sigma2: float) -> "Nonlinearity":
        if not 0 < sigma1 < sigma2:
            raise ConfigurationError(
                f"two_power requires sigma2 > sigma1 > 0, got ({sigma1}, {sigma2})"
            )
        return cls("two_power", lam=float(lam1), sigma=float(sigma1),
                   lam2=float(lam2), sigma2=float(sigma2))

    @classmethod
    def log_power(cls, lam: float, sigma: float) -> "Nonlinearity":
        if sigma <= 0:
            raise ConfigurationError(f"log_power requires sigma > 0, got {sigma}")
        return cls("log_power", lam=float(lam), sigma=float(sigma))

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    def f(self, rho):
        """f(rho) for rho >= 0 (scalar or array); real-valued."""
        rho_arr = np.asarray(rho, dtype=np.float64)
        if np.any(rho_arr < 0):
            raise ConfigurationError("density rho must be >= 0")
        if self.kind == "none":
            out = np.zeros_like(rho_arr)
        elif self.kind == "power":
            out = self.lam * rho_arr**self.sigma
        elif self.kind == "two_power":
            out = self.lam * rho_arr**self.sigma + self.lam2 * rho_arr**self.sigma2
        elif self.kind == "log_power":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(
                    rho_arr > 0, self.lam * rho_arr**self.sigma * np.log(rho_arr), 0.0
                )
        else:
            raise ConfigurationError(f"unknown nonlinearity kind {self.kind!r}")
        return float(out) if np.isscalar(rho) else out

    def G(self, z):
        """G(z) = f(|z|^2) z for complex scalars or arrays."""
        z_arr = np.asarray(z, dtype=np.complex128)
        out = self.f(z_arr.real**2 + z_arr.imag**2) * z_arr
        return complex(out) if np.isscalar(z) else out

    def lipschitz_bound(self, M0: float) -> float:
        """A constant L with |G(z1) - G(z2)| <= L |z1 - z2| for |z_j| <= M0."""
        if M0 < 0:
            raise ConfigurationError(f"M0 must be >= 0, got {M0}")
        if M0 == 0 or self.kind == "none":
            return 0.0
        if self.kind == "power":
            return abs(self.lam) * (2 * self.sigma + 1) * M0 ** (2 * self.sigma)
        if self.kind == "two_power":
            return (
                abs(self.lam) * (2 * self.sigma + 1) * M0 ** (2 * self.sigma)
                + abs(self.lam2) * (2 * self.sigma2 + 1) * M0 ** (2 * self.sigma2)
            )
        raise NotImplementedError(f"no Lipschitz constant implemented for kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "power":
            return f"power({self.lam:g};{self.sigma:g})"
        if self.kind == "two_power":
            return f"two_power({self.lam:g};{self.sigma:g};{self.lam2:g};{self.sigma2:g})"
        return f"log_power({self.lam:g};{self.sigma:g})"


def apply_B(
    V: Potential,
    nl: Nonlinearity,
    psi: SpectralField,
    oversample: int = 16,
    nonlinear_mode: str = "collocation",
) -> SpectralField:
    """P_N B(psi) with B(v) = V v + f(|v|^2) v.

    The potential part is always the alias-free spectral product (exact for
    V in X_2N); the nonlinear part is either plain N-point collocation
    (pseudospectral mode) or oversampled projection (spectral mode).
    """
    grid = psi.grid
    out = np.zeros(grid.N, dtype=np.complex128)
    if not V.is_none:
        table = potential_coeffs(V, grid, 2 * grid.N)
        out += extended_potential_term(table, psi).coeffs
    if not nl.is_none:
        if nonlinear_mode == "collocation":
            g = nl.G(_sp.nodal_values(psi))
            out += dft(GridField.from_samples(grid, g)).coeffs
        elif nonlinear_mode == "projection":
            fine = PeriodicGrid(grid.a, grid.b, oversample * grid.N)
            g = nl.G(_sp.nodal_values(zero_pad(psi, fine)))
            out += _sp._to_natural_order(
                _sp._truncate_fft(_sp._fft.fft(g, norm="forward"), grid.N)
            )
        else:
            raise ConfigurationError(f"unknown nonlinear mode {nonlinear_mode!r}")
    return SpectralField(grid, out)


def extended_potential_term(V2N: SpectralField, psi: SpectralField) -> SpectralField:
    """The spectral potential product P_N(P_2N(V) I_N psi)."""
    return _sp.extended_product(V2N, psi)
