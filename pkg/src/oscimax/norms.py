"""Sobolev, homogeneous Sobolev, log-weighted, and Lebesgue norms.

All integrals are plain trapezoid sums on the uniform grid (equal weights,
since every integrand in scope vanishes or decays beyond the grid). Under
the package Fourier convention, Plancherel reads ‖f‖₂ = (2π)^{-n/2}‖f̂‖₂.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import FREQUENCY, SPATIAL, RepresentationError, SpectralField


class DivergenceError(ValueError):
    """Homogeneous weight |ξ|^{2s} non-integrable against F at the origin."""


@dataclass(frozen=True)
class SobolevWeight:
    """Frequency weight (1+|ξ|²)^s, |ξ|^{2s}, or (1+|ξ|²)^s·log(2+|ξ|²)^p."""

    s: float
    homogeneous: bool = False
    log_exponent: float = 0.0

    def __post_init__(self):
        if self.log_exponent < 0:
            raise ValueError("log_exponent must be >= 0")
        if self.log_exponent > 0 and self.homogeneous:
            raise ValueError("log factor combines only with the inhomogeneous weight")

    def values(self, xi_sq: np.ndarray) -> np.ndarray:
        """Weight evaluated on |ξ|² samples (origin handled by the caller)."""
        if self.homogeneous:
            if self.s == 0.0:
                return np.ones_like(xi_sq)
            with np.errstate(divide="ignore"):
                w = xi_sq ** self.s
            return w
        w = (1.0 + xi_sq) ** self.s
        if self.log_exponent > 0:
            w = w * np.log(2.0 + xi_sq) ** self.log_exponent
        return w


def _origin_cell_average(grid, s: float) -> float:
    """Average of |ξ|^{2s} over the frequency cell at the origin (−n/2 < s < 0)."""
    sub = 64
    axes = [
        (np.arange(sub) + 0.5) / sub * d - d / 2.0 for d in grid.freq_spacings
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    xi_sq = sum(m * m for m in mesh)
    return float(np.mean(xi_sq ** s))


def sobolev_norm(F: SpectralField, weight) -> float:
    """Weighted frequency-side L² norm (square-rooted trapezoid quadrature).

    `weight` is one SobolevWeight (isotropic, via |ξ|²) or a per-axis
    sequence of SobolevWeight whose product forms a tensor weight.
    """
    if F.representation != FREQUENCY:
        raise RepresentationError("sobolev_norm expects a frequency field")
    grid = F.grid
    origin = tuple(m // 2 for m in grid.ns)

    if isinstance(weight, SobolevWeight):
        mesh = grid.freq_meshgrid()
        xi_sq = sum(m * m for m in mesh)
        w = weight.values(xi_sq)
        if weight.homogeneous and weight.s < 0:
            if abs(F.values[origin]) > 0:
                if weight.s <= -grid.dimension / 2.0:
                    raise DivergenceError(
                        f"|ξ|^{2 * weight.s} is not integrable against F(0) != 0"
                    )
                w[origin] = _origin_cell_average(grid, weight.s)
            else:
                w[origin] = 0.0
        elif weight.homogeneous:
            w[origin] = 0.0 if weight.s > 0 else 1.0
    else:
        weights: Sequence[SobolevWeight] = list(weight)
        if len(weights) != grid.dimension:
            raise ValueError("need one per-axis weight per dimension")
        w = np.ones(grid.shape)
        for j, wj in enumerate(weights):
            xi = grid.freq_axis(j)
            wv = wj.values(xi * xi)
            if wj.homogeneous:
                if wj.s < 0:
                    raise DivergenceError("per-axis homogeneous weights need s >= 0")
                wv[grid.ns[j] // 2] = 0.0 if wj.s > 0 else 1.0
            shape = [1] * grid.dimension
            shape[j] = grid.ns[j]
            w = w * wv.reshape(shape)

    val = np.sum(w * np.abs(F.values) ** 2) * grid.freq_cell_volume
    return float(np.sqrt(val))


def sobolev_norm_tensor(axis_fields: Sequence[SpectralField], s: float,
                        homogeneous: bool = False) -> float:
    """Isotropic H_s/Ḣ_s norm of the outer product of 1D frequency fields.

    Exact for tensor fields: restricts the quadrature to the per-axis
    supports, so huge nD grids are never materialized.
    """
    if not axis_fields:
        raise ValueError("need at least one axis field")
    sq_axes = []
    xi_axes = []
    for f in axis_fields:
        if f.representation != FREQUENCY or f.grid.dimension != 1:
            raise RepresentationError("axis fields must be 1D frequency fields")
        nz = np.nonzero(f.values)[0]
        if nz.size == 0:
            return 0.0
        sq_axes.append(np.abs(f.values[nz]) ** 2 * f.grid.freq_spacings[0])
        xi_axes.append(f.grid.freq_axis(0)[nz])
    mesh_sq = np.meshgrid(*xi_axes, indexing="ij")
    xi_sq = sum(m * m for m in mesh_sq)
    if homogeneous:
        with np.errstate(divide="ignore"):
            w = np.where(xi_sq > 0, xi_sq ** s, 0.0 if s >= 0 else np.inf)
        if np.any(np.isinf(w)):
            raise DivergenceError("tensor homogeneous weight hit the origin with s < 0")
    else:
        w = (1.0 + xi_sq) ** s
    dens = np.multiply.reduce(np.ix_(*sq_axes)) if len(sq_axes) > 1 else sq_axes[0]
    return float(np.sqrt(np.sum(w * dens)))


def lq_norm(f: SpectralField, q: float, region=None) -> float:
    """L^q norm over a box region (default whole grid); q=∞ gives max modulus.

    `region` is a per-axis sequence of (lo, hi); membership is half-open
    lo <= x < hi so adjacent boxes partition exactly.
    """
    if f.representation != SPATIAL:
        raise RepresentationError("lq_norm expects a spatial field")
    if not math.isinf(q) and q < 1:
        raise ValueError("q must be >= 1 (or math.inf)")
    vals = np.abs(f.values)
    if region is not None:
        region = list(region)
        if len(region) != f.grid.dimension:
            raise ValueError("region needs one (lo, hi) per axis")
        mask = np.ones(f.grid.shape, dtype=bool)
        for j, (lo, hi) in enumerate(region):
            x = f.grid.axis(j)
            m = (x >= lo) & (x < hi)
            shape = [1] * f.grid.dimension
            shape[j] = f.grid.ns[j]
            mask &= m.reshape(shape)
        vals = np.where(mask, vals, 0.0)
    if math.isinf(q):
        return float(np.max(vals))
    return float(np.sum(vals ** q) * f.grid.cell_volume) ** (1.0 / q)
