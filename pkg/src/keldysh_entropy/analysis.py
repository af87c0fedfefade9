"""Saturation times, power-law exponents and Schmidt decay fits.

The transport diagnostics all reduce to least-squares lines in logarithmic
coordinates: the saturation time of an entropy curve against system size,
the entropy itself against time inside a growth window, and the logarithm
of a Schmidt value against ``t^beta`` for a stretch exponent ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NotSaturatedError

PLATEAU_SLOPE_MAX = 0.05  # |d ln S / d ln t| gate over the last decade

# Default growth-exponent windows; the early window covers the microscopic
# transient, the intermediate window runs from beyond it up to a fraction of
# the saturation time.
EARLY_WINDOW = (0.2, 2.0)
INTERMEDIATE_START = 2.0
INTERMEDIATE_END_FRACTION = 0.1


@dataclass(frozen=True)
class SaturationResult:
    """Late-time plateau value and the half-plateau crossing time."""

    s_sat: float
    t_half: float
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line in log-log coordinates."""

    exponent: float
    prefactor: float
    window: Tuple[float, float]
    r_squared: float
    stderr: float = float("nan")


def _loglog_fit(x: np.ndarray, y: np.ndarray, window: Tuple[float, float]) -> PowerLawFit:
    lx, ly = np.log(x), np.log(y)
    coeffs, residuals, *_ = np.polyfit(lx, ly, 1, full=True)
    slope, intercept = coeffs
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(residuals[0]) if len(residuals) else 0.0
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    dof = len(x) - 2
    if dof > 0 and ss_tot > 0:
        sxx = float(np.sum((lx - lx.mean()) ** 2))
        stderr = float(np.sqrt(ss_res / dof / sxx))
    else:
        stderr = 0.0
    return PowerLawFit(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        window=(float(window[0]), float(window[1])),
        r_squared=r2,
        stderr=stderr,
    )


def saturation(times: np.ndarray, values: np.ndarray) -> SaturationResult:
    """Plateau value and first crossing of half the plateau.

    The plateau is the mean over the last time decade of the grid, guarded
    by requiring ``|d ln S / d ln t| < 0.05`` there; the crossing time is
    located by linear interpolation in ``(ln t, S)``.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or times.shape != values.shape or len(times) < 2:
        raise ValueError("need matching 1D time and value arrays with >= 2 points")
    tail = times >= times[-1] / 10.0
    tail_t, tail_s = times[tail], values[tail]
    if np.any(tail_s <= 0):
        # never grew (or decayed to zero): there is no plateau to speak of
        raise NotSaturatedError(tail_slope=float("inf"))
    slope = np.polyfit(np.log(tail_t), np.log(tail_s), 1)[0]
    if abs(slope) > PLATEAU_SLOPE_MAX:
        raise NotSaturatedError(tail_slope=float(slope))
    s_sat = float(np.mean(tail_s))
    half = s_sat / 2.0

    above = values >= half
    if above[0]:
        first = 0
        t_half = float(times[0])
        bracket = (float(times[0]), float(times[0]))
    else:
        crossings = np.nonzero(~above[:-1] & above[1:])[0]
        if len(crossings) == 0:
            raise NotSaturatedError(tail_slope=float(slope))
        first = int(crossings[0])
        t_lo, t_hi = times[first], times[first + 1]
        s_lo, s_hi = values[first], values[first + 1]
        frac = (half - s_lo) / (s_hi - s_lo)
        t_half = float(np.exp(np.log(t_lo) + frac * (np.log(t_hi) - np.log(t_lo))))
        bracket = (float(t_lo), float(t_hi))
    return SaturationResult(s_sat=s_sat, t_half=t_half, bracket=bracket)


def fit_saturation_exponent(points: Sequence[Tuple[float, float]]) -> PowerLawFit:
    """Exponent of ``t_half ~ L^alpha`` from (L, t_half) pairs."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 4:
        raise ValueError("need at least 4 (L, t_half) points")
    sizes, t_half = pts[:, 0], pts[:, 1]
    if np.any(t_half <= 0) or np.any(sizes <= 0):
        raise ValueError("sizes and saturation times must be positive")
    return _loglog_fit(sizes, t_half, window=(float(sizes.min()), float(sizes.max())))


def fit_growth_exponent(
    times: np.ndarray, values: np.ndarray, window: Tuple[float, float]
) -> PowerLawFit:
    """Slope of ``ln S`` against ``ln t`` over the requested time window."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (times >= lo) & (times <= hi)
    if np.count_nonzero(mask) < 4:
        raise ValueError(f"fewer than 4 grid points inside window [{lo}, {hi}]")
    if np.any(values[mask] <= 0):
        raise ValueError("entropy must be positive inside the fit window")
    return _loglog_fit(times[mask], values[mask], window=(float(lo), float(hi)))


def intermediate_window(t_half: float) -> Tuple[float, float]:
    """Default fit window between the microscopic transient and saturation."""
    return (INTERMEDIATE_START, INTERMEDIATE_END_FRACTION * t_half)


def saturation_anchored_window(t_half: float) -> Tuple[float, float]:
    """Growth window over the last factor four before half saturation.

    Scales with the curve's own dynamics instead of fixed times; useful for
    quasiperiodic chains whose beat-dominated transient stretches well past
    a few hopping times as the potential strengthens.
    """
    return (t_half / 4.0, t_half)


@dataclass(frozen=True)
class SchmidtDecayFit:
    """Per-index fit of ``Lambda_i(t) = c_i exp(-d_i t^beta)``."""

    beta: float
    c: np.ndarray
    d: np.ndarray
    r_squared: np.ndarray
    window: Tuple[float, float]


def fit_schmidt_decay(
    times: np.ndarray,
    log_values: np.ndarray,
    beta: float,
    window: Optional[Tuple[float, float]] = None,
) -> SchmidtDecayFit:
    """Linear fits of ``ln Lambda_i`` against ``t^beta`` inside a window.

    ``log_values`` has shape (n_times, n_indices) and holds ``ln Lambda_i``
    (typical values are already geometric means).  ``beta`` is an input, not
    fitted; compare fits across candidate exponents to pick a regime.
    """
    times = np.asarray(times, dtype=float)
    log_values = np.asarray(log_values, dtype=float)
    if log_values.ndim != 2 or log_values.shape[0] != len(times):
        raise ValueError("log_values must have shape (n_times, n_indices)")
    if window is None:
        window = (float(times[0]), float(times[-1]))
    lo, hi = window
    mask = (times >= lo) & (times <= hi)
    if np.count_nonzero(mask) < 4:
        raise ValueError(f"fewer than 4 grid points inside window [{lo}, {hi}]")
    if not np.all(np.isfinite(log_values[mask])):
        raise ValueError("non-positive Schmidt value inside the fit window")
    x = times[mask] ** beta
    n_idx = log_values.shape[1]
    cs = np.empty(n_idx)
    ds = np.empty(n_idx)
    r2 = np.empty(n_idx)
    for i in range(n_idx):
        y = log_values[mask, i]
        slope, intercept = np.polyfit(x, y, 1)
        pred = slope * x + intercept
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        ss_res = float(np.sum((y - pred) ** 2))
        cs[i] = np.exp(intercept)
        ds[i] = -slope
        r2[i] = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return SchmidtDecayFit(
        beta=float(beta), c=cs, d=ds, r_squared=r2, window=(float(lo), float(hi))
    )
