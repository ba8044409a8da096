"""Exponential fits ``y = c1 exp(+/- c2 N)`` by least squares on ``ln y``."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

SIGNS = ("decay", "growth")


@dataclass(frozen=True)
class FitResult:
    c1: float
    c2: float
    r_squared: float
    n_points: int
    sign: str = "growth"

    def __call__(self, n):
        s = 1.0 if self.sign == "growth" else -1.0
        return self.c1 * np.exp(s * self.c2 * np.asarray(n, dtype=float))

    def to_dict(self) -> dict:
        return asdict(self)


def fit_exponential(points, sign: str = "growth") -> FitResult:
    """Fit ``(N, y)`` pairs.

    ``c2`` is reported with the sign convention of ``sign`` and is not clipped:
    a "decay" fit to growing data gives a negative ``c2``.
    """
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}, got {sign!r}")
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least 3 (N, y) points")
    n, y = pts[:, 0], pts[:, 1]
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise ValueError("exponential fit needs finite positive y")
    ly = np.log(y)
    slope, intercept = np.polyfit(n, ly, 1)
    resid = ly - (intercept + slope * n)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    # a flat series is fitted perfectly by c2 = 0
    r2 = 1.0 if ss_tot <= 1e-300 else max(0.0, 1.0 - ss_res / ss_tot)
    c2 = float(slope) if sign == "growth" else float(-slope)
    if abs(c2) < 1e-14:
        c2 = 0.0
    return FitResult(float(np.exp(intercept)), c2, r2, len(pts), sign)
