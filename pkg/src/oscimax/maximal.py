"""Maximal operators sup_t |S_t f| over finite time grids, and linearizations t(x).

The continuum supremum is approximated from below by a finite candidate
search. Ties break to the lexicographically smallest time vector, so the
returned selection is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .spectral import (
    FREQUENCY,
    DimensionMismatchError,
    DispersionLaw,
    SpectralField,
    UniformGrid,
    evolve,
    forward_transform,
    phase_power,
)


@dataclass(frozen=True)
class TimeSearchGrid:
    """Per-axis candidate times; star mode lives strictly inside (0,1)."""

    axes: tuple[np.ndarray, ...]
    mode: str  # "star" | "doublestar"

    def __post_init__(self):
        if self.mode not in ("star", "doublestar"):
            raise ValueError(f"unknown mode {self.mode!r}")
        axes = []
        for c in self.axes:
            c = np.unique(np.asarray(c, dtype=np.float64))
            if c.size == 0:
                raise ValueError("empty candidate list")
            if self.mode == "star" and (c.min() <= 0.0 or c.max() >= 1.0):
                raise ValueError("star-mode candidates must lie strictly in (0,1)")
            axes.append(c)
        object.__setattr__(self, "axes", tuple(axes))

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def product_size(self) -> int:
        return int(np.prod([c.size for c in self.axes]))

    @classmethod
    def star_geometric(cls, count: int = 128, lo: float = 1e-4,
                       hi: float = 1.0 - 1e-4, dim: int = 1) -> "TimeSearchGrid":
        c = np.geomspace(lo, hi, count)
        return cls((c,) * dim, "star")

    @classmethod
    def star_linear(cls, count: int, lo: float = 1e-4,
                    hi: float = 1.0 - 1e-4, dim: int = 1) -> "TimeSearchGrid":
        c = np.linspace(lo, hi, count)
        return cls((c,) * dim, "star")

    @classmethod
    def doublestar_geometric(cls, T: float, count: int = 64,
                             lo_frac: float = 1e-4, dim: int = 1) -> "TimeSearchGrid":
        """Symmetric candidates ±geomspace(lo_frac·T, T) ∪ {0}."""
        g = np.geomspace(lo_frac * T, T, count)
        c = np.concatenate([-g[::-1], [0.0], g])
        return cls((c,) * dim, "doublestar")

    @classmethod
    def doublestar_linear(cls, T: float, count: int, dim: int = 1) -> "TimeSearchGrid":
        g = np.linspace(0.0, T, count + 1)[1:]
        c = np.concatenate([-g[::-1], [0.0], g])
        return cls((c,) * dim, "doublestar")

    @classmethod
    def explicit(cls, values, mode: str = "star") -> "TimeSearchGrid":
        return cls((np.asarray(values, dtype=np.float64),), mode)

    def refine(self, factor: int = 2) -> "TimeSearchGrid":
        """Insert midpoints (in the spacing idiom of each axis) — a superset."""
        new_axes = []
        for c in self.axes:
            if c.size == 1:
                new_axes.append(c)
                continue
            pos = c[c > 0]
            geometric = pos.size > 2 and np.allclose(
                np.diff(np.log(pos)), np.diff(np.log(pos))[0], rtol=1e-6
            )
            mids = np.sqrt(c[:-1] * c[1:]) if geometric and np.all(c > 0) else (
                0.5 * (c[:-1] + c[1:])
            )
            new_axes.append(np.unique(np.concatenate([c, mids])))
        return TimeSearchGrid(tuple(new_axes), self.mode)


@dataclass
class TimeSelection:
    """A per-spatial-point time choice t(x), with its originating search grid."""

    grid: UniformGrid
    times: np.ndarray  # shape grid.shape + (dim_t,)
    search: TimeSearchGrid

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        if times.shape[:-1] != self.grid.shape:
            raise DimensionMismatchError("selection shape mismatch with grid")
        if times.shape[-1] != self.search.dimension:
            raise DimensionMismatchError("selection has wrong time dimension")
        for j in range(self.search.dimension):
            if not np.all(np.isin(times[..., j], self.search.axes[j])):
                raise ValueError("selection contains times outside the search grid")
        self.times = times


def selection_from_times(grid, times: np.ndarray, mode: str = "star") -> TimeSelection:
    """Wrap an explicit t(x) array as a TimeSelection (search = its value set)."""
    times = np.asarray(times, dtype=np.float64)
    if times.shape == grid.shape:
        times = times[..., None]
    axes = tuple(np.unique(times[..., j]) for j in range(times.shape[-1]))
    return TimeSelection(grid, times, TimeSearchGrid(axes, mode))


def maximal_field(f: SpectralField, dispersion: DispersionLaw,
                  search: TimeSearchGrid, max_product: int = 128 * 128,
                  sweeps: int = 2):
    """Pointwise max of |S_t f| over the candidate product, plus the argmax.

    Lower-bounds the true supremum. If the full product exceeds
    `max_product`, falls back to a strided product pass followed by
    per-axis alternating sweeps (still a valid lower bound).
    """
    if search.dimension != f.grid.dimension:
        raise DimensionMismatchError("search dimension != grid dimension")
    F = f if f.representation == FREQUENCY else forward_transform(f)

    if search.product_size <= max_product:
        combos = itertools.product(*search.axes)
    else:
        stride = int(np.ceil((search.product_size / max_product) ** (1.0 / search.dimension)))
        coarse = [c[::stride] for c in search.axes]
        combos = itertools.product(*coarse)

    best = None
    best_t = None
    for t in combos:
        mag = np.abs(evolve(F, dispersion, t).values)
        if best is None:
            best = mag
            best_t = np.empty(f.grid.shape + (search.dimension,))
            best_t[...] = t
        else:
            upd = mag > best
            if np.any(upd):
                np.copyto(best, mag, where=upd)
                best_t[upd] = t

    if search.product_size > max_product:
        # Alternating per-axis refinement around the coarse optimum.
        for _ in range(sweeps):
            for j in range(search.dimension):
                for c in search.axes[j]:
                    trial = best_t.copy()
                    trial[..., j] = c
                    mag = np.abs(_linearized_values_field(F, dispersion, trial))
                    upd = mag > best
                    if np.any(upd):
                        np.copyto(best, mag, where=upd)
                        best_t[upd, j] = c

    sel = TimeSelection(f.grid, best_t, search)
    return best, sel


def maximal_field_tensor(axis_fields, dispersion: DispersionLaw, searches):
    """Exact per-axis factorization of the maximal field for tensor inputs.

    For f = f_1 ⊗ ... ⊗ f_n the sup over the time product factorizes:
    sup_t Π|S_{t_j}f_j| = Π sup_{t_j}|S_{t_j}f_j|. Returns the per-axis
    (field, selection) pairs; outer-product the fields as needed.
    """
    out = []
    for f, a, s in zip(axis_fields, dispersion.exponents, searches):
        out.append(maximal_field(f, DispersionLaw((a,)), s))
    return out


def stabilized_maximal_field(f, dispersion, search, lq=2.0, tol: float = 0.01,
                             max_doublings: int = 5):
    """Refine the search grid (doubling) until the L^lq norm moves < tol."""
    from .norms import lq_norm  # local import to avoid a cycle at module load
    from .spectral import SPATIAL

    field, sel = maximal_field(f, dispersion, search)
    norm = lq_norm(SpectralField(f.grid, SPATIAL, field.astype(np.complex128)), lq)
    for _ in range(max_doublings):
        search = search.refine()
        field2, sel2 = maximal_field(f, dispersion, search)
        norm2 = lq_norm(SpectralField(f.grid, SPATIAL, field2.astype(np.complex128)), lq)
        moved = abs(norm2 - norm) / max(norm2, 1e-300)
        field, sel, norm = field2, sel2, norm2
        if moved < tol:
            break
    return field, sel


def _linearized_values_field(F: SpectralField, dispersion: DispersionLaw,
                             times: np.ndarray, group_cap: int = 512) -> np.ndarray:
    """S_{t(x)}f on the grid for per-point times (shape grid.shape + (n,))."""
    grid = F.grid
    flat_t = times.reshape(-1, times.shape[-1])
    uniq, inv = np.unique(flat_t, axis=0, return_inverse=True)

    if uniq.shape[0] <= group_cap:
        out = np.empty(grid.size, dtype=np.complex128)
        for k, t in enumerate(uniq):
            mask = inv == k
            if not np.any(mask):
                continue
            vals = evolve(F, dispersion, tuple(t)).values.ravel()
            out[mask] = vals[mask]
        return out.reshape(grid.shape)

    # Many distinct times: direct sum over the (band-limited) nonzero modes.
    flat = F.values.ravel()
    nz = np.nonzero(flat)[0]
    idx = np.unravel_index(nz, grid.shape)
    xi = np.stack([grid.freq_axis(j)[idx[j]] for j in range(grid.dimension)], axis=1)
    weights = flat[nz] * grid.freq_cell_volume
    mesh = grid.meshgrid()
    X = np.stack([m.ravel() for m in mesh], axis=1)
    out = np.empty(grid.size, dtype=np.complex128)
    chunk = max(1, int(4e6) // max(nz.size, 1))
    powers = np.stack(
        [phase_power(xi[:, j], a) for j, a in enumerate(dispersion.exponents)], axis=1
    )
    for lo in range(0, grid.size, chunk):
        tb = flat_t[lo : lo + chunk]
        xb = X[lo : lo + chunk]
        phase = xb @ xi.T + tb @ powers.T
        out[lo : lo + chunk] = np.exp(1j * phase) @ weights
    return out.reshape(grid.shape)


def apply_linearized(f: SpectralField, dispersion: DispersionLaw,
                     sel: TimeSelection) -> SpectralField:
    """The linearized operator Sf(x) = ∫ e^{iΣt_j(x)|ξ_j|^{a_j}} e^{ix·ξ} f̂(ξ) dξ."""
    if sel.grid != f.grid:
        raise DimensionMismatchError("selection grid != field grid")
    F = f if f.representation == FREQUENCY else forward_transform(f)
    vals = _linearized_values_field(F, dispersion, sel.times)
    from .spectral import SPATIAL

    return SpectralField(f.grid, SPATIAL, vals)


def linearized_values_at(F: SpectralField, dispersion: DispersionLaw,
                         xs: np.ndarray, times: np.ndarray) -> np.ndarray:
    """S_{t(x)}f at arbitrary points xs (k×n) with per-point times (k×n)."""
    if F.representation != FREQUENCY:
        raise ValueError("linearized_values_at expects a frequency field")
    grid = F.grid
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    times = np.atleast_2d(np.asarray(times, dtype=np.float64))
    flat = F.values.ravel()
    nz = np.nonzero(flat)[0]
    if nz.size == 0:
        return np.zeros(xs.shape[0], dtype=np.complex128)
    idx = np.unravel_index(nz, grid.shape)
    xi = np.stack([grid.freq_axis(j)[idx[j]] for j in range(grid.dimension)], axis=1)
    weights = flat[nz] * grid.freq_cell_volume
    powers = np.stack(
        [phase_power(xi[:, j], a) for j, a in enumerate(dispersion.exponents)], axis=1
    )
    out = np.empty(xs.shape[0], dtype=np.complex128)
    chunk = max(1, int(4e6) // max(nz.size, 1))
    for lo in range(0, xs.shape[0], chunk):
        phase = xs[lo : lo + chunk] @ xi.T + times[lo : lo + chunk] @ powers.T
        out[lo : lo + chunk] = np.exp(1j * phase) @ weights
    return out


def packet_maximal_sweep(envelope_values: np.ndarray, eta_grid,
                         phase_of_eta, t_values: np.ndarray):
    """Maximal field |sup_t ∫ e^{ixη} e^{i t·φ(η)} G(η) dη| in a moving frame.

    For fields concentrated near a large carrier frequency ξ0, substituting
    ξ = ξ0 + η leaves |S_t f| unchanged up to a unimodular factor, so the
    sweep runs on the small η-grid whose dual x-window covers the swept
    packet positions. φ(η) = |ξ0+η|^a is passed in sampled form.
    """
    m = eta_grid.ns[0]
    deta = eta_grid.freq_spacings[0]
    G = np.asarray(envelope_values, dtype=np.complex128)
    phase = np.asarray(phase_of_eta, dtype=np.float64)
    best = np.zeros(m)
    best_t = np.zeros(m)
    for t in np.asarray(t_values, dtype=np.float64):
        spec = G * np.exp(1j * t * phase)
        vals = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(spec))) * (m * deta)
        mag = np.abs(vals)
        upd = mag > best
        if np.any(upd):
            np.copyto(best, mag, where=upd)
            best_t[upd] = t
    return best, best_t
