"""Discrete Fourier model of the dispersive evolution S_t.

Conventions (non-unitary):
    f̂(ξ) = ∫ e^{-ix·ξ} f(x) dx
    f(x)  = (2π)^{-n} ∫ e^{ix·ξ} f̂(ξ) dξ
    S_t f(x) = ∫ e^{ix·ξ} e^{i(t_1|ξ_1|^{a_1}+...+t_n|ξ_n|^{a_n})} f̂(ξ) dξ

so S_0 f = (2π)^n f and T_t f = (2π)^{-n} S_t f recovers f at t=0.

Grids are symmetric about the origin with x_k = (k - m/2)h and the dual
frequency grid ξ_j = (j - m/2)·2π/(mh); the transforms below are exact
discrete inverses of each other (trapezoid weights h^n resp. dξ^n/(2π)^n).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class RepresentationError(ValueError):
    """Field is in the wrong representation for the requested operation."""


class DimensionMismatchError(ValueError):
    """Grid / law / time-vector dimensions disagree."""


class AliasingWarning(UserWarning):
    """Significant frequency mass near the grid boundary; evolution may alias."""


@dataclass(frozen=True)
class DispersionLaw:
    """Phase-power multiindex a = (a_1, ..., a_n), all a_j > 1."""

    exponents: tuple[float, ...]

    def __post_init__(self):
        exps = tuple(float(a) for a in self.exponents)
        if not exps:
            raise ValueError("need at least one exponent")
        if any(a <= 1.0 for a in exps):
            raise ValueError(f"all exponents must exceed 1, got {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def total(self) -> float:
        """|a| = a_1 + ... + a_n."""
        return sum(self.exponents)


def law(*exponents: float) -> DispersionLaw:
    return DispersionLaw(tuple(exponents))


@dataclass(frozen=True)
class UniformGrid:
    """Symmetric uniform grid with its dual frequency grid.

    Per axis: m_j points, spatial spacing h_j, frequency spacing
    dξ_j = 2π/(m_j h_j); duality h_j·dξ_j = 2π/m_j holds by construction.
    """

    ns: tuple[int, ...]
    spacings: tuple[float, ...]

    def __post_init__(self):
        ns = tuple(int(m) for m in self.ns)
        hs = tuple(float(h) for h in self.spacings)
        if len(ns) != len(hs):
            raise DimensionMismatchError("ns and spacings length mismatch")
        if any(m < 4 or m % 2 for m in ns):
            raise ValueError("point counts must be even and >= 4")
        if any(h <= 0 for h in hs):
            raise ValueError("spacings must be positive")
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "spacings", hs)

    @classmethod
    def from_extent(cls, m: int, extent: float, dim: int = 1) -> "UniformGrid":
        """Grid covering [-extent, extent) per axis with m points."""
        h = 2.0 * extent / m
        return cls((m,) * dim, (h,) * dim)

    @classmethod
    def from_freq_spacing(cls, m: int, dxi: float, dim: int = 1) -> "UniformGrid":
        """Grid whose dual frequency spacing is exactly dxi per axis."""
        h = 2.0 * np.pi / (m * dxi)
        return cls((m,) * dim, (h,) * dim)

    @property
    def dimension(self) -> int:
        return len(self.ns)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.ns

    @property
    def size(self) -> int:
        return int(np.prod(self.ns))

    @property
    def freq_spacings(self) -> tuple[float, ...]:
        return tuple(2.0 * np.pi / (m * h) for m, h in zip(self.ns, self.spacings))

    @property
    def extents(self) -> tuple[float, ...]:
        return tuple(m * h / 2.0 for m, h in zip(self.ns, self.spacings))

    @property
    def freq_extents(self) -> tuple[float, ...]:
        return tuple(m * d / 2.0 for m, d in zip(self.ns, self.freq_spacings))

    def axis(self, j: int = 0) -> np.ndarray:
        m, h = self.ns[j], self.spacings[j]
        return (np.arange(m) - m // 2) * h

    def freq_axis(self, j: int = 0) -> np.ndarray:
        m = self.ns[j]
        return (np.arange(m) - m // 2) * self.freq_spacings[j]

    def meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(*(self.axis(j) for j in range(self.dimension)), indexing="ij")

    def freq_meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(
            *(self.freq_axis(j) for j in range(self.dimension)), indexing="ij"
        )

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def freq_cell_volume(self) -> float:
        return float(np.prod(self.freq_spacings))


SPATIAL = "spatial"
FREQUENCY = "frequency"


@dataclass
class SpectralField:
    """Complex samples on a UniformGrid, in spatial or frequency representation."""

    grid: UniformGrid
    representation: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.representation not in (SPATIAL, FREQUENCY):
            raise RepresentationError(f"unknown representation {self.representation!r}")
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            raise DimensionMismatchError(
                f"values shape {vals.shape} != grid shape {self.grid.shape}"
            )
        self.values = vals

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.representation, self.values.copy())


def field_from_function(grid: UniformGrid, fn, representation: str = SPATIAL) -> SpectralField:
    """Sample fn on the grid. fn receives one meshgrid array per axis."""
    mesh = grid.meshgrid() if representation == SPATIAL else grid.freq_meshgrid()
    vals = np.asarray(fn(*mesh), dtype=np.complex128)
    return SpectralField(grid, representation, np.broadcast_to(vals, grid.shape).copy())


def forward_transform(f: SpectralField) -> SpectralField:
    """f̂(ξ_j) = h^n Σ_k e^{-i x_k·ξ_j} f(x_k), via centered FFT."""
    if f.representation != SPATIAL:
        raise RepresentationError("forward_transform expects a spatial field")
    vals = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.values)))
    vals *= f.grid.cell_volume
    return SpectralField(f.grid, FREQUENCY, vals)


def inverse_transform(F: SpectralField) -> SpectralField:
    """Exact inverse of forward_transform ((2π)^{-n} ∫ e^{ixξ} · dξ discretized)."""
    if F.representation != FREQUENCY:
        raise RepresentationError("inverse_transform expects a frequency field")
    vals = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(F.values)))
    vals /= F.grid.cell_volume
    return SpectralField(F.grid, SPATIAL, vals)


def _as_time_tuple(t, dim: int) -> tuple[float, ...]:
    if np.isscalar(t):
        tt = (float(t),) * dim
    else:
        tt = tuple(float(v) for v in t)
    if len(tt) != dim:
        raise DimensionMismatchError(f"time vector length {len(tt)} != dimension {dim}")
    return tt


def phase_power(xi: np.ndarray, a: float) -> np.ndarray:
    """|ξ|^a with the ξ=0 value exactly 0 (continuous there for a > 1)."""
    ax = np.abs(xi)
    if a == 2.0:
        return ax * ax
    if a == 3.0:
        return ax * ax * ax
    out = np.zeros_like(ax, dtype=np.float64)
    nz = ax > 0
    out[nz] = ax[nz] ** a
    return out


def dispersion_phase(grid: UniformGrid, dispersion: DispersionLaw, t) -> np.ndarray:
    """Σ_j t_j |ξ_j|^{a_j} on the frequency grid."""
    if dispersion.dimension != grid.dimension:
        raise DimensionMismatchError("law dimension != grid dimension")
    tt = _as_time_tuple(t, grid.dimension)
    phase = np.zeros(grid.shape)
    for j, (a, tj) in enumerate(zip(dispersion.exponents, tt)):
        axis_phase = tj * phase_power(grid.freq_axis(j), a)
        shape = [1] * grid.dimension
        shape[j] = grid.ns[j]
        phase = phase + axis_phase.reshape(shape)
    return phase


def boundary_mass_fraction(F: SpectralField, band: float = 0.05) -> float:
    """Fraction of |F| mass within `band` of the frequency-grid boundary."""
    total = float(np.sum(np.abs(F.values)))
    if total == 0.0:
        return 0.0
    mask = np.zeros(F.grid.shape, dtype=bool)
    for j in range(F.grid.dimension):
        xi = np.abs(F.grid.freq_axis(j))
        edge = xi >= (1.0 - band) * F.grid.freq_extents[j]
        shape = [1] * F.grid.dimension
        shape[j] = F.grid.ns[j]
        mask |= edge.reshape(shape)
    return float(np.sum(np.abs(F.values[mask]))) / total


def evolve(f: SpectralField, dispersion: DispersionLaw, t) -> SpectralField:
    """S_t f on the spatial grid (no (2π)^{-n}; evolve(f, law, 0) = (2π)^n f).

    Accepts either representation. Warns (AliasingWarning) when more than
    1e-6 of the frequency mass sits within 5% of the grid boundary.
    """
    F = f if f.representation == FREQUENCY else forward_transform(f)
    if boundary_mass_fraction(F) > 1e-6:
        warnings.warn(
            "frequency mass near grid boundary exceeds 1e-6 of total; "
            "the oscillatory multiplier will alias",
            AliasingWarning,
            stacklevel=2,
        )
    phase = dispersion_phase(F.grid, dispersion, t)
    out = inverse_transform(SpectralField(F.grid, FREQUENCY, F.values * np.exp(1j * phase)))
    out.values *= (2.0 * np.pi) ** F.grid.dimension
    return out


def scale_to_Tt(s_field: SpectralField) -> SpectralField:
    """T_t f = (2π)^{-n} S_t f."""
    out = s_field.copy()
    out.values *= (2.0 * np.pi) ** (-s_field.grid.dimension)
    return out


def evaluate_offgrid(F: SpectralField, dispersion: DispersionLaw, t, x) -> complex:
    """Trapezoid value of ∫ e^{ix·ξ} e^{iΣ t_j|ξ_j|^{a_j}} F(ξ) dξ at arbitrary x."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return complex(evaluate_offgrid_batch(F, dispersion, t, x)[0])


def evaluate_offgrid_batch(
    F: SpectralField, dispersion: DispersionLaw, t, xs: np.ndarray
) -> np.ndarray:
    """Vectorized evaluate_offgrid over rows of xs (shape (k, n))."""
    if F.representation != FREQUENCY:
        raise RepresentationError("evaluate_offgrid expects a frequency field")
    dim = F.grid.dimension
    if dispersion.dimension != dim:
        raise DimensionMismatchError("law dimension != grid dimension")
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim == 0:
        xs = xs.reshape(1, 1)
    elif xs.ndim == 1:
        xs = xs[:, None] if dim == 1 else xs[None, :]
    if xs.shape[1] != dim:
        raise DimensionMismatchError(f"x rows must have length {dim}")
    tt = _as_time_tuple(t, dim)

    # Restrict to nonzero modes; the fields in play are band-limited bumps.
    flat = F.values.ravel()
    nz = np.nonzero(flat)[0]
    if nz.size == 0:
        return np.zeros(xs.shape[0], dtype=np.complex128)
    idx = np.unravel_index(nz, F.grid.shape)
    xi = np.stack([F.grid.freq_axis(j)[idx[j]] for j in range(dim)], axis=1)
    weights = flat[nz] * F.grid.freq_cell_volume
    phase = np.zeros(nz.size)
    for j, (a, tj) in enumerate(zip(dispersion.exponents, tt)):
        phase += tj * phase_power(xi[:, j], a)
    weights = weights * np.exp(1j * phase)

    out = np.empty(xs.shape[0], dtype=np.complex128)
    chunk = max(1, int(4e6) // max(nz.size, 1))
    for lo in range(0, xs.shape[0], chunk):
        block = xs[lo : lo + chunk]
        out[lo : lo + chunk] = np.exp(1j * (block @ xi.T)) @ weights
    return out
