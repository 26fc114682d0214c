"""Log-log power-law fitting shared by the kernel checks and the harness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ExponentReport:
    """A fitted log-log slope against a predicted exponent."""

    scenario: str
    fitted: float
    residual_rms: float
    predicted: float
    tolerance: float
    verdict: str  # pass | fail | informational
    window: tuple[float, float] | None = None
    intercept: float = 0.0
    n_used: int = 0
    n_dropped: int = 0
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "scenario": self.scenario,
            "fitted": self.fitted,
            "residual": self.residual_rms,
            "predicted": self.predicted,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "intercept": self.intercept,
            "n_used": self.n_used,
            "n_dropped": self.n_dropped,
        }
        if self.window is not None:
            d["window"] = list(self.window)
        if self.detail:
            d["detail"] = self.detail
        return d


def fit_loglog(xs, ys, window=None, min_points: int = 8):
    """Least-squares slope of log y vs log x.

    Nonpositive ys are dropped (count returned); raises on fewer than
    `min_points` usable samples. Returns (slope, intercept, residual_rms,
    n_used, n_dropped).
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same shape")
    keep = ys > 0
    n_dropped = int(np.sum(~keep))
    if window is not None:
        lo, hi = window
        keep &= (xs >= lo) & (xs <= hi)
    xs, ys = xs[keep], ys[keep]
    if xs.size < min_points:
        raise ValueError(f"need at least {min_points} usable samples, got {xs.size}")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return float(slope), float(intercept), rms, int(xs.size), n_dropped


def verdict(fitted: float, predicted: float, tolerance: float,
            residual_rms: float, informational: bool = False,
            residual_cap: float = 0.1) -> str:
    if informational:
        return "informational"
    if residual_rms > residual_cap:
        return "fail"
    return "pass" if abs(fitted - predicted) <= tolerance else "fail"


def exponent_report(scenario: str, xs, ys, predicted: float, tolerance: float,
                    window=None, informational: bool = False,
                    detail: dict | None = None) -> ExponentReport:
    slope, intercept, rms, n_used, n_dropped = fit_loglog(xs, ys, window=window)
    return ExponentReport(
        scenario=scenario,
        fitted=slope,
        residual_rms=rms,
        predicted=predicted,
        tolerance=tolerance,
        verdict=verdict(slope, predicted, tolerance, rms, informational),
        window=tuple(window) if window is not None else None,
        intercept=intercept,
        n_used=n_used,
        n_dropped=n_dropped,
        detail=detail or {},
    )
