"""Periodic grids, discrete Fourier transforms and spectral-space operations.

Functions in X_N (trigonometric polynomials of degree N on a periodic interval
(a, b)) are stored as coefficient vectors indexed by the centered mode set
T_N = {-N/2, ..., N/2-1}; nodal representations live on the N+1 grid points
x_j = a + j*h with the periodic endpoint duplicated.  All transforms use the
convention

    c_l = (1/N) * sum_j v_j exp(-i mu_l (x_j - a)),   mu_l = 2*pi*l/(b - a),

so a constant field has c_0 equal to its value.  Everything here is a pure
function of immutable inputs and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .errors import ConfigurationError

__all__ = [
    "PeriodicGrid",
    "SpectralField",
    "GridField",
    "dft",
    "idft",
    "evaluate",
    "project",
    "sobolev_norm",
    "zero_pad",
    "extended_product",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic mesh on (a, b) with N modes / interior nodes.

    Attributes:
        a, b: domain endpoints, b > a.
        N: even mode count, >= 4; the mode set is T_N = {-N/2, ..., N/2-1}.
        h: mesh size (b - a)/N.
        nodes: the N+1 points x_j = a + j*h, j = 0..N (periodic pair at ends).
        mu: angular frequencies 2*pi*l/(b-a) in natural order l = -N/2..N/2-1.
    """

    a: float
    b: float
    N: int
    h: float = field(init=False, repr=False)
    nodes: np.ndarray = field(init=False, repr=False)
    mu: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.b > self.a:
            raise ConfigurationError(f"domain requires b > a, got ({self.a}, {self.b})")
        if self.N % 2 != 0 or self.N < 4:
            raise ConfigurationError(f"N must be even and >= 4, got {self.N}")
        length = self.b - self.a
        object.__setattr__(self, "h", length / self.N)
        nodes = self.a + self.h * np.arange(self.N + 1)
        ell = np.arange(-self.N // 2, self.N // 2)
        mu = 2.0 * np.pi * ell / length
        nodes.flags.writeable = False
        mu.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "mu", mu)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def modes(self) -> np.ndarray:
        """Mode indices l in natural order -N/2..N/2-1."""
        return np.arange(-self.N // 2, self.N // 2)

    def mode_index(self, l: int) -> int:
        """Position of mode l in a natural-order coefficient array."""
        if not -self.N // 2 <= l < self.N // 2:
            raise IndexError(f"mode {l} outside T_N for N={self.N}")
        return l + self.N // 2

    def same_domain(self, other: "PeriodicGrid") -> bool:
        return self.a == other.a and self.b == other.b

    def mu_fft(self) -> np.ndarray:
        """Frequencies in FFT storage order [0..N/2-1, -N/2..-1]."""
        return _to_fft_order(self.mu)


@dataclass(frozen=True)
class SpectralField:
    """Element of X_N: coefficients on T_N in natural order, tied to a grid."""

    grid: PeriodicGrid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.grid.N,):
            raise ConfigurationError(
                f"coefficient array of shape {coeffs.shape} does not match N={self.grid.N}"
            )
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def mode(self, l: int) -> complex:
        return complex(self.coeffs[self.grid.mode_index(l)])

    @classmethod
    def zero(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls(grid, np.zeros(grid.N, dtype=np.complex128))

    @classmethod
    def pure_mode(cls, grid: PeriodicGrid, l: int, amplitude: complex = 1.0) -> "SpectralField":
        c = np.zeros(grid.N, dtype=np.complex128)
        c[grid.mode_index(l)] = amplitude
        return cls(grid, c)


@dataclass(frozen=True)
class GridField:
    """Nodal values (v_0, ..., v_N) with v_0 == v_N (the space Y_N)."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.N + 1,):
            raise ConfigurationError(
                f"value array of shape {values.shape} does not match N+1={self.grid.N + 1}"
            )
        if values[0] != values[-1]:
            raise ConfigurationError("periodic endpoint mismatch: values[0] != values[N]")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_samples(cls, grid: PeriodicGrid, interior: np.ndarray) -> "GridField":
        """Build from the N values at x_0..x_{N-1}, duplicating the endpoint."""
        interior = np.asarray(interior, dtype=np.complex128)
        if interior.shape != (grid.N,):
            raise ConfigurationError(
                f"expected {grid.N} interior samples, got {interior.shape}"
            )
        return cls(grid, np.concatenate([interior, interior[:1]]))

    @classmethod
    def from_function(cls, grid: PeriodicGrid, f) -> "GridField":
        vals = np.asarray(f(grid.nodes[:-1]), dtype=np.complex128)
        return cls.from_samples(grid, vals)

    @property
    def interior(self) -> np.ndarray:
        """The N independent values v_0..v_{N-1}."""
        return self.values[:-1]


def _to_fft_order(natural: np.ndarray) -> np.ndarray:
    return np.fft.ifftshift(natural)


def _to_natural_order(fft_ordered: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(fft_ordered)


def _pad_fft(c_fft: np.ndarray, M: int) -> np.ndarray:
    """Embed FFT-ordered coefficients of length N into length M >= N."""
    N = c_fft.shape[0]
    out = np.zeros(M, dtype=np.complex128)
    out[: N // 2] = c_fft[: N // 2]
    out[M - N // 2 :] = c_fft[N // 2 :]
    return out


def _truncate_fft(c_fft: np.ndarray, N: int) -> np.ndarray:
    """Keep the T_N modes of FFT-ordered coefficients of length M >= N."""
    M = c_fft.shape[0]
    return np.concatenate([c_fft[: N // 2], c_fft[M - N // 2 :]])


def dft(v: GridField) -> SpectralField:
    """Discrete Fourier transform Y_N -> X_N (trigonometric interpolation)."""
    c_fft = _fft.fft(v.interior, norm="forward")
    return SpectralField(v.grid, _to_natural_order(c_fft))


def idft(c: SpectralField) -> GridField:
    """Evaluate an X_N element at the grid nodes, duplicating the endpoint."""
    vals = _fft.ifft(_to_fft_order(c.coeffs), norm="forward")
    return GridField(c.grid, np.concatenate([vals, vals[:1]]))


def nodal_values(c: SpectralField) -> np.ndarray:
    """The N nodal values of an X_N element (no duplicated endpoint)."""
    return _fft.ifft(_to_fft_order(c.coeffs), norm="forward")


def evaluate(c: SpectralField, x) -> complex | np.ndarray:
    """Evaluate sum_l c_l exp(i mu_l (x - a)) at arbitrary x in [a, b]."""
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < c.grid.a) or np.any(xs > c.grid.b):
        raise ConfigurationError(f"evaluation point outside [{c.grid.a}, {c.grid.b}]")
    flat = np.atleast_1d(xs).ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    block = max(1, 2**22 // max(1, c.grid.N))  # cap the phase matrix size
    for lo in range(0, flat.size, block):
        chunk = flat[lo : lo + block] - c.grid.a
        out[lo : lo + block] = np.exp(1j * np.multiply.outer(chunk, c.grid.mu)) @ c.coeffs
    out = out.reshape(xs.shape)
    return complex(out) if np.isscalar(x) or xs.ndim == 0 else out


def project(f, grid: PeriodicGrid, oversample: int = 16) -> SpectralField:
    """Approximate the L2-projection P_N f by oversampled trigonometric interpolation.

    Samples f on an (oversample*N)-point grid, transforms, and truncates to
    T_N.  Exact to round-off for f already in X_N; for general f the aliasing
    error is the tail mass folded down from modes beyond oversample*N/2.
    """
    if oversample < 1 or (oversample & (oversample - 1)) != 0:
        raise ConfigurationError(f"oversample must be a positive power of two, got {oversample}")
    M = oversample * grid.N
    xs = grid.a + (grid.length / M) * np.arange(M)
    samples = np.asarray(f(xs), dtype=np.complex128)
    c_fft = _fft.fft(samples, norm="forward")
    return SpectralField(grid, _to_natural_order(_truncate_fft(c_fft, grid.N)))


def sobolev_norm(c: SpectralField, alpha: float) -> float:
    """H^alpha norm via Parseval: sqrt((b-a) * sum (1+mu_l^2)^alpha |c_l|^2)."""
    if alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha}")
    weights = (1.0 + c.grid.mu**2) ** alpha if alpha != 0 else 1.0
    peak = float(np.max(np.abs(c.coeffs)))
    if peak == 0.0:
        return 0.0
    if not np.isfinite(peak):
        return peak
    # factor out the peak so |c|^2 cannot overflow for huge iterates
    scaled = np.abs(c.coeffs / peak)
    return peak * float(np.sqrt(c.grid.length * np.sum(weights * scaled**2)))


def zero_pad(c: SpectralField, fine_grid: PeriodicGrid) -> SpectralField:
    """Embed an X_N element into X_M (M >= N) on the same domain."""
    if not c.grid.same_domain(fine_grid):
        raise ConfigurationError(
            f"domain mismatch: ({c.grid.a}, {c.grid.b}) vs ({fine_grid.a}, {fine_grid.b})"
        )
    if fine_grid.N < c.grid.N:
        raise ConfigurationError(
            f"target grid must be at least as fine: {fine_grid.N} < {c.grid.N}"
        )
    padded = _pad_fft(_to_fft_order(c.coeffs), fine_grid.N)
    return SpectralField(fine_grid, _to_natural_order(padded))


def extended_product(V2N: SpectralField, psi: SpectralField) -> SpectralField:
    """Alias-free P_N(P_2N(V) * I_N psi) via a length-4N transform.

    V2N holds the 2N coefficients of the projected potential, psi the N
    coefficients of the iterate.  Their product lies in X_4N, so a 4N-point
    nodal multiply followed by a forward transform and truncation to T_N is
    exact; for V in X_2N this equals P_N(V * I_N psi).
    """
    N = psi.grid.N
    if V2N.grid.N != 2 * N:
        raise ConfigurationError(
            f"potential table must hold 2N={2 * N} modes, got {V2N.grid.N}"
        )
    if not V2N.grid.same_domain(psi.grid):
        raise ConfigurationError("potential and field live on different domains")
    M = 4 * N
    v_nodes = _fft.ifft(_pad_fft(_to_fft_order(V2N.coeffs), M), norm="forward")
    p_nodes = _fft.ifft(_pad_fft(_to_fft_order(psi.coeffs), M), norm="forward")
    prod_fft = _fft.fft(v_nodes * p_nodes, norm="forward")
    return SpectralField(psi.grid, _to_natural_order(_truncate_fft(prod_fft, N)))
