"""Observable extraction and closed-form predictions.

Densities are handled as probability mass per grid point over an explicit
axis (the clock-time axis t = q / sqrt(lam) in the weyl regime).  Lobe
statistics split the axis at t = 0 and report mass, mass-weighted mean and
variance per half-line; no mixture fitting.

Closed forms scored against simulation:

    clock time        t_c             = 2 pi sqrt(N) / (sigma lam)
    temporal spread   (Delta t_c)^2   = 2 / |lam tan(theta/4)|
    successive gap    exact           = 2 pi (sqrt(N+1) - sqrt(N)) / (sigma lam)
                      approximated by pi / (sigma lam sqrt(N))

Conditional states overlap in time once the successive gap falls below the
spread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .hilbert import StateVector

TWO_PI = 2.0 * math.pi


class SingleLobeError(ValueError):
    """The density has no resolvable two-lobe structure about the split point."""


@dataclass(frozen=True)
class PeakReport:
    """Two-lobe statistics plus closed-form predictions and relative errors."""

    t_plus: float
    t_minus: float
    var_plus: float
    var_minus: float
    mass_plus: float
    mass_minus: float
    predicted_tc: float = float("nan")
    predicted_var: float = float("nan")
    rel_err_position: float = float("nan")
    rel_err_var: float = float("nan")


@dataclass(frozen=True)
class SpacingReport:
    """Successive clock-time spacing (exact and approximate) and the overlap flag."""

    n: int
    exact_spacing: float
    approx_spacing: float
    spread: float
    overlapping: bool


def coarse_grain(density: np.ndarray, spacing: float,
                 kernel_width: float) -> np.ndarray:
    """Circular convolution with a normalized Gaussian kernel; mass preserving."""
    density = np.asarray(density, dtype=float)
    if kernel_width < spacing:
        raise ValueError(
            f"kernel width {kernel_width} is below the grid spacing {spacing}")
    dim = density.shape[0]
    idx = np.arange(dim)
    wrapped = np.minimum(idx, dim - idx) * spacing
    kernel = np.exp(-0.5 * (wrapped / kernel_width) ** 2)
    kernel /= kernel.sum()
    out = np.fft.irfft(np.fft.rfft(density) * np.fft.rfft(kernel), n=dim)
    return np.maximum(out, 0.0)


def lobe_stats(density: np.ndarray, axis: np.ndarray,
               split_at: float = 0.0, mass_floor: float = 0.01) -> PeakReport:
    """Mass, mass-weighted mean and variance of each half-line about split_at."""
    density = np.asarray(density, dtype=float)
    axis = np.asarray(axis, dtype=float)
    total = density.sum()
    if not total > 0:
        raise ValueError("density has no mass")
    left = axis < split_at
    mass_minus = float(density[left].sum() / total)
    mass_plus = float(density[~left].sum() / total)
    if mass_minus < mass_floor or mass_plus < mass_floor:
        raise SingleLobeError(
            f"one-sided density: masses ({mass_minus:.4f}, {mass_plus:.4f}) "
            f"about split {split_at}")

    def moments(sel):
        w = density[sel] / density[sel].sum()
        x = axis[sel]
        mean = float(np.sum(w * x))
        var = float(np.sum(w * (x - mean) ** 2))
        return mean, var

    t_minus, var_minus = moments(left)
    t_plus, var_plus = moments(~left)
    return PeakReport(t_plus, t_minus, var_plus, var_minus, mass_plus, mass_minus)


def score_peaks(stats: PeakReport, predicted_tc: float,
                predicted_var: float) -> PeakReport:
    """Attach predictions and relative errors to raw lobe statistics."""
    rel_pos = abs(stats.t_plus - predicted_tc) / predicted_tc
    rel_var = abs(stats.var_plus - predicted_var) / predicted_var
    return PeakReport(stats.t_plus, stats.t_minus, stats.var_plus, stats.var_minus,
                      stats.mass_plus, stats.mass_minus,
                      predicted_tc, predicted_var, rel_pos, rel_var)


def predict_clock_time(n: int, sigma: float, lam: float) -> float:
    """t_c = 2 pi sqrt(N) / (sigma lam)."""
    if n < 1 or not (sigma > 0 and lam > 0):
        raise ValueError("n, sigma and lam must be positive")
    return TWO_PI * math.sqrt(n) / (sigma * lam)


def predict_spread(lam: float, theta: float) -> float:
    """Lobe variance 2 / |lam tan(theta/4)| for theta in (2 pi, 4 pi)."""
    if not (TWO_PI < theta < 2.0 * TWO_PI):
        raise ValueError(f"theta must lie in (2*pi, 4*pi), got {theta}")
    tan = math.tan(theta / 4.0)
    if abs(tan) < 1e-9:
        raise ValueError(
            f"spread diverges as theta -> 4*pi (tan(theta/4) = {tan:.2e})")
    return 2.0 / abs(lam * tan)


def spacing_report(n: int, sigma: float, lam: float, theta: float) -> SpacingReport:
    """Exact and approximate successive spacing, spread, and the overlap flag."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    exact = (predict_clock_time(n + 1, sigma, lam)
             - predict_clock_time(n, sigma, lam))
    approx = math.pi / (sigma * lam * math.sqrt(n))
    spread = math.sqrt(predict_spread(lam, theta))
    return SpacingReport(n, exact, approx, spread, approx < spread)


def theta_scan(lam: float, theta_grid: Sequence[float], n: int,
               measure: Callable[[float], float]) -> list[dict]:
    """Measured vs predicted lobe variance across theta.

    ``measure(theta)`` must return the measured lobe variance of a build at
    that theta (engine hook; injected so the scan logic is testable alone).
    Predicted variance must be strictly increasing across the grid.
    """
    thetas = [float(t) for t in theta_grid]
    for theta in thetas:
        if not (TWO_PI < theta < 2.0 * TWO_PI):
            raise ValueError(f"theta {theta} outside the open interval (2*pi, 4*pi)")
    rows = []
    last = -math.inf
    for theta in sorted(thetas):
        predicted = predict_spread(lam, theta)
        if predicted <= last:
            raise AssertionError("predicted variance must increase with theta")
        last = predicted
        rows.append({"theta": theta, "measured_var": float(measure(theta)),
                     "predicted_var": predicted})
    return rows


def density_bhattacharyya(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Squared Bhattacharyya coefficient of two normalized mass sequences."""
    a = np.asarray(rho_a, dtype=float)
    b = np.asarray(rho_b, dtype=float)
    a = a / a.sum()
    b = b / b.sum()
    bc = float(np.sum(np.sqrt(a * b)))
    return min(bc * bc, 1.0)


def model_match(qvp_state: StateVector, model_state: StateVector,
                kernel_width: float) -> float:
    """Classical fidelity of the two coarse-grained coordinate densities."""
    if qvp_state.space != model_state.space:
        raise ValueError("states live on different grids")
    spacing = qvp_state.space.spacing
    ga = coarse_grain(qvp_state.density(), spacing, kernel_width)
    gb = coarse_grain(model_state.density(), spacing, kernel_width)
    return density_bhattacharyya(ga, gb)


def lobe_density_fidelity(density_a: np.ndarray, axis_a: np.ndarray,
                          density_b: np.ndarray, axis_b: np.ndarray,
                          side: str = "plus") -> float:
    """Classical fidelity of two half-line-restricted densities.

    The densities may live on different grids; both are restricted to the
    requested half-line, renormalized, and compared on a common axis by
    linear interpolation of the per-unit-length density.
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")

    def restrict(density, axis):
        density = np.asarray(density, dtype=float)
        axis = np.asarray(axis, dtype=float)
        sel = axis >= 0 if side == "plus" else axis < 0
        x = axis[sel]
        rho = density[sel]
        if rho.sum() <= 0:
            raise SingleLobeError(f"no mass on the {side} half-line")
        dx = float(np.median(np.diff(x)))
        return x, rho / (rho.sum() * dx)

    xa, fa = restrict(density_a, axis_a)
    xb, fb = restrict(density_b, axis_b)
    lo = max(xa.min(), xb.min())
    hi = min(xa.max(), xb.max())
    step = min(float(np.median(np.diff(xa))), float(np.median(np.diff(xb))))
    common = np.arange(lo, hi, step)
    ia = np.interp(common, xa, fa, left=0.0, right=0.0)
    ib = np.interp(common, xb, fb, left=0.0, right=0.0)
    ia /= np.trapezoid(ia, common)
    ib /= np.trapezoid(ib, common)
    bc = float(np.trapezoid(np.sqrt(ia * ib), common))
    return min(bc * bc, 1.0)
