"""Decay-exponent estimation by least squares in log-log coordinates.

A fitted exponent over a window is the numerical stand-in for the two-sided
bound relation "w is trapped between constant multiples of the profile": the
bounds force the log-log slope toward the profile's exponent once the window
sits clear of both boundary layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollinearWindowError, ConfigError, WindowError
from .grid import GridFunction
from .params import AsymptoticProfile, ProfileKind

MIN_WINDOW_DECADES = 1.5


@dataclass(frozen=True)
class FitResult:
    power: float
    log_power: float
    amplitude: float
    window: tuple[float, float]
    rms_residual: float
    n_points: int


@dataclass(frozen=True)
class ProfileMatch:
    passed: bool
    power_error: float
    log_power_error: float


def _window_data(w: GridFunction, window: tuple[float, float], min_decades: float):
    lo, hi = window
    if not (0 < lo < hi):
        raise WindowError(f"invalid window ({lo}, {hi})")
    if np.log10(hi / lo) < min_decades - 1e-12:
        raise WindowError(
            f"window ({lo:g}, {hi:g}) spans {np.log10(hi/lo):.2f} decades; "
            f"need at least {min_decades}"
        )
    mask = w.grid.window_mask(lo, hi)
    if np.count_nonzero(mask) < 8:
        raise WindowError("window contains fewer than 8 grid nodes")
    vals = w.values[mask]
    if np.any(vals <= 0):
        raise WindowError("fit requires positive values on the window")
    return w.grid.r[mask], vals


def fit_power(w: GridFunction, window: tuple[float, float],
              min_decades: float = MIN_WINDOW_DECADES) -> FitResult:
    """Least-squares line in (ln r, ln w); log_power is reported as 0.

    ``min_decades`` guards against windows too short for a stable slope;
    callers fitting clean closed forms may lower it explicitly.
    """
    r, vals = _window_data(w, window, min_decades)
    x, y = np.log(r), np.log(vals)
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return FitResult(
        power=float(coef[1]),
        log_power=0.0,
        amplitude=float(np.exp(coef[0])),
        window=(float(window[0]), float(window[1])),
        rms_residual=float(np.sqrt(np.mean(resid ** 2))),
        n_points=x.size,
    )


def fit_power_log(w: GridFunction, window: tuple[float, float], r0: float,
                  min_decades: float = MIN_WINDOW_DECADES) -> FitResult:
    """Two-regressor fit ln w ~ ln A + e ln r + f ln ln(r/r0)."""
    r, vals = _window_data(w, window, min_decades)
    if window[0] <= r0:
        raise WindowError("log-corrected fit needs the window to start beyond r0")
    x1 = np.log(r)
    x2 = np.log(np.log(r / r0))
    A = np.vstack([np.ones_like(x1), x1, x2]).T
    # guard against a window too short to separate ln r from ln ln r
    scaled = A / np.linalg.norm(A, axis=0)
    sv = np.linalg.svd(scaled, compute_uv=False)
    if sv[-1] < 1e-7:
        raise CollinearWindowError(
            "window too narrow to separate the power from the log correction"
        )
    coef, *_ = np.linalg.lstsq(A, np.log(vals), rcond=None)
    resid = np.log(vals) - A @ coef
    return FitResult(
        power=float(coef[1]),
        log_power=float(coef[2]),
        amplitude=float(np.exp(coef[0])),
        window=(float(window[0]), float(window[1])),
        rms_residual=float(np.sqrt(np.mean(resid ** 2))),
        n_points=x1.size,
    )


def fit_profile(w: GridFunction, window: tuple[float, float], r0: float,
                expect_log: bool) -> FitResult:
    return fit_power_log(w, window, r0) if expect_log else fit_power(w, window)


def compare_profile(
    fit: FitResult,
    predicted: AsymptoticProfile,
    tol_power: float = 0.05,
    tol_log: float = 0.1,
) -> ProfileMatch:
    """PASS iff both the power and the log exponent sit within tolerance."""
    if predicted.kind not in (ProfileKind.PURE_POWER, ProfileKind.POWER_LOG):
        raise ConfigError(f"cannot compare against profile kind {predicted.kind}")
    dp = abs(fit.power - predicted.power)
    dl = abs(fit.log_power - predicted.log_power)
    return ProfileMatch(passed=bool(dp <= tol_power and dl <= tol_log),
                        power_error=float(dp), log_power_error=float(dl))
