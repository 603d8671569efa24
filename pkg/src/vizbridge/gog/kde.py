"""Joint kernel density estimation with the Epanechnikov product kernel.

K(u) = 0.75(1 - u^2) on |u| <= 1, zero elsewhere. The grid value at (x_i, y_j)
is (1 / (n h_x h_y)) * sum_k K((x_i - x_k)/h_x) K((y_j - y_k)/h_y); the first
grid index runs along x, the second along y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class KdeError(Exception):
    pass


@dataclass(frozen=True)
class KdeSpec:
    bandwidth: tuple[float, float]
    grid: tuple[int, int] = (64, 64)
    kernel: str = "epanechnikov"

    def __post_init__(self) -> None:
        hx, hy = self.bandwidth
        if not (hx > 0 and hy > 0):
            raise KdeError(f"bandwidths must be positive, got {self.bandwidth}")
        gx, gy = self.grid
        if gx < 2 or gy < 2:
            raise KdeError(f"grid must be at least 2x2, got {self.grid}")
        if self.kernel != "epanechnikov":
            raise KdeError(f"unsupported kernel {self.kernel!r}")


def epanechnikov(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)


def silverman_bandwidth(values: np.ndarray) -> float:
    """Deterministic default bandwidth: 1.06 * sigma * n^(-1/5)."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n == 0:
        raise KdeError("bandwidth of an empty sample")
    sigma = float(np.std(values, ddof=1)) if n > 1 else 0.0
    if not np.isfinite(sigma) or sigma == 0.0:
        sigma = 1.0  # degenerate sample: fall back to unit scale
    return 1.06 * sigma * n ** (-1.0 / 5.0)


def epanechnikov_kde_2d(
    points: list[tuple[float, float]] | np.ndarray,
    spec: KdeSpec,
    domain: tuple[tuple[float, float], tuple[float, float]],
) -> np.ndarray:
    """Evaluate the joint density on a gx-by-gy grid spanning the domain."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise KdeError("density of an empty point set")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise KdeError(f"points must be (n, 2), got shape {pts.shape}")
    (x_lo, x_hi), (y_lo, y_hi) = domain
    if not (x_lo < x_hi and y_lo < y_hi):
        raise KdeError(f"degenerate domain {domain}")
    hx, hy = spec.bandwidth
    gx, gy = spec.grid
    xs = np.linspace(x_lo, x_hi, gx)
    ys = np.linspace(y_lo, y_hi, gy)
    n = pts.shape[0]
    kx = epanechnikov((xs[:, None] - pts[None, :, 0]) / hx)  # (gx, n)
    ky = epanechnikov((ys[:, None] - pts[None, :, 1]) / hy)  # (gy, n)
    grid = kx @ ky.T / (n * hx * hy)
    return grid


def grid_coordinates(
    spec: KdeSpec, domain: tuple[tuple[float, float], tuple[float, float]]
) -> tuple[np.ndarray, np.ndarray]:
    (x_lo, x_hi), (y_lo, y_hi) = domain
    return np.linspace(x_lo, x_hi, spec.grid[0]), np.linspace(y_lo, y_hi, spec.grid[1])
