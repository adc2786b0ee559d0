"""Response-surface analysis of the appeal model at fixed container height.

With d1 pinned, the quadratic appeal collapses to a quadratic in
(d2, d3):

    P(d2, d3) = c0 + c_d2*d2 + c_d3*d3 + c_d2sq*d2^2 + c_d3sq*d3^2 + c_d2d3*d2*d3

rendered as a colormap raster, and analyzed through its level sets
(iso-appeal polylines via marching squares) and steepest-ascent
direction field.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .appeal import AppealModel


@dataclass(frozen=True)
class ResponseSurface:
    """Quadratic in (d2, d3) obtained by fixing d1."""

    fixed_d1: float
    c0: float
    c_d2: float
    c_d3: float
    c_d2sq: float
    c_d3sq: float
    c_d2d3: float

    def __call__(self, d2, d3):
        d2 = np.asarray(d2, dtype=float)
        d3 = np.asarray(d3, dtype=float)
        return (self.c0 + self.c_d2 * d2 + self.c_d3 * d3
                + self.c_d2sq * d2 * d2 + self.c_d3sq * d3 * d3
                + self.c_d2d3 * d2 * d3)

    def gradient(self, d2, d3):
        """(dP/dd2, dP/dd3): the steepest-ascent direction field."""
        d2 = np.asarray(d2, dtype=float)
        d3 = np.asarray(d3, dtype=float)
        return (self.c_d2 + 2.0 * self.c_d2sq * d2 + self.c_d2d3 * d3,
                self.c_d3 + 2.0 * self.c_d3sq * d3 + self.c_d2d3 * d2)

    def to_dict(self) -> dict:
        return {
            "fixed_d1": self.fixed_d1,
            "c0": self.c0, "c_d2": self.c_d2, "c_d3": self.c_d3,
            "c_d2sq": self.c_d2sq, "c_d3sq": self.c_d3sq, "c_d2d3": self.c_d2d3,
        }


def response_surface(model: AppealModel, fixed_d1: float) -> ResponseSurface:
    """Collapse the full quadratic onto (d2, d3) at a fixed d1."""
    if not fixed_d1 > 0:
        raise ValueError(f"fixed_d1 must be positive, got {fixed_d1}")
    a = model.a
    return ResponseSurface(
        fixed_d1=float(fixed_d1),
        c0=float(a[0] * fixed_d1 + a[9] + a[3] * fixed_d1**2),
        c_d2=float(a[1] + a[6] * fixed_d1),
        c_d3=float(a[2] + a[7] * fixed_d1),
        c_d2sq=float(a[4]),
        c_d3sq=float(a[5]),
        c_d2d3=float(a[8]),
    )


@dataclass(frozen=True)
class SurfaceGrid:
    """Raster of the surface over a rectangle, cell centers at the
    given axis values."""

    d2_values: np.ndarray
    d3_values: np.ndarray
    values: np.ndarray  # shape (len(d3_values), len(d2_values))

    def csv(self) -> str:
        lines = ["d2,d3,appeal"]
        for row, d3 in enumerate(self.d3_values):
            for col, d2 in enumerate(self.d2_values):
                lines.append(f"{d2:.6g},{d3:.6g},{self.values[row, col]:.10g}")
        return "\n".join(lines) + "\n"


def surface_grid(surface: ResponseSurface, d2_range, d3_range, resolution) -> SurfaceGrid:
    """Deterministic raster of the surface. ``resolution`` is either one
    count for both axes or a (n_d2, n_d3) pair; a 1-point axis sits at
    the range midpoint."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    n2, n3 = resolution
    if n2 < 1 or n3 < 1:
        raise ValueError("resolution must be >= 1 per axis")
    lo2, hi2 = map(float, d2_range)
    lo3, hi3 = map(float, d3_range)
    if hi2 < lo2 or hi3 < lo3:
        raise ValueError("empty range")
    d2 = np.linspace(lo2, hi2, n2) if n2 > 1 else np.array([(lo2 + hi2) / 2.0])
    d3 = np.linspace(lo3, hi3, n3) if n3 > 1 else np.array([(lo3 + hi3) / 2.0])
    grid_d2, grid_d3 = np.meshgrid(d2, d3)
    return SurfaceGrid(d2_values=d2, d3_values=d3, values=surface(grid_d2, grid_d3))


@dataclass(frozen=True)
class IsoLine:
    """Level set of the surface over a region."""

    level: float
    polylines: tuple[np.ndarray, ...]  # each (m, 2) array of (d2, d3)
    empty: bool
    line_fits: tuple[dict, ...]  # per polyline: slope/intercept of d3 on d2


@dataclass(frozen=True)
class IsoAnalysis:
    lines: tuple[IsoLine, ...]
    gradient_d2: np.ndarray
    gradient_d3: np.ndarray
    grid: SurfaceGrid


def iso_appeal_lines(surface: ResponseSurface, levels, region,
                     resolution: int = 200) -> IsoAnalysis:
    """Extract iso-appeal polylines and the steepest-ascent field.

    ``region`` is ((d2_min, d2_max), (d3_min, d3_max)). Levels outside
    the surface's range over the region come back flagged empty. Each
    polyline also carries its least-squares straight-line fit, whose
    slope is d(d3)/d(d2) in design space.
    """
    d2_range, d3_range = region
    grid = surface_grid(surface, d2_range, d3_range, resolution)
    gd2, gd3 = np.meshgrid(grid.d2_values, grid.d3_values)
    grad2, grad3 = surface.gradient(gd2, gd3)
    lines = []
    for level in levels:
        segments = _marching_squares(grid.d2_values, grid.d3_values, grid.values, float(level))
        polylines = _chain_segments(segments)
        fits = tuple(_line_fit(p) for p in polylines)
        lines.append(IsoLine(level=float(level), polylines=tuple(polylines),
                             empty=not polylines, line_fits=fits))
    return IsoAnalysis(lines=tuple(lines), gradient_d2=grad2, gradient_d3=grad3, grid=grid)


def _line_fit(points: np.ndarray) -> dict:
    """OLS fit d3 = slope*d2 + intercept; near-vertical lines report the
    inverse slope instead."""
    d2, d3 = points[:, 0], points[:, 1]
    span2 = d2.max() - d2.min()
    span3 = d3.max() - d3.min()
    if span2 >= span3 * 1e-9 and span2 > 0:
        coeffs = np.polyfit(d2, d3, 1)
        residual = float(np.sqrt(np.mean((np.polyval(coeffs, d2) - d3) ** 2)))
        return {"slope": float(coeffs[0]), "intercept": float(coeffs[1]),
                "rms": residual, "vertical": False}
    return {"slope": float("inf"), "intercept": float(d2.mean()),
            "rms": 0.0, "vertical": True}


def _marching_squares(xs, ys, values, level):
    """Linear-interpolation marching squares; returns raw segments."""
    segments = []
    n_rows, n_cols = values.shape
    for r in range(n_rows - 1):
        for c in range(n_cols - 1):
            corners = (
                (xs[c], ys[r], values[r, c]),
                (xs[c + 1], ys[r], values[r, c + 1]),
                (xs[c + 1], ys[r + 1], values[r + 1, c + 1]),
                (xs[c], ys[r + 1], values[r + 1, c]),
            )
            inside = sum(1 << idx for idx, (_, _, v) in enumerate(corners) if v > level)
            if inside in (0, 15):
                continue
            crossings = []
            for edge in range(4):
                x0, y0, v0 = corners[edge]
                x1, y1, v1 = corners[(edge + 1) % 4]
                if (v0 > level) != (v1 > level):
                    t = (level - v0) / (v1 - v0)
                    crossings.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
            # ambiguous saddle cells produce 4 crossings; pair them by edge order
            for start in range(0, len(crossings) - 1, 2):
                segments.append((crossings[start], crossings[start + 1]))
    return segments


def _chain_segments(segments, decimals: int = 9):
    """Join shared endpoints into polylines (deterministic order)."""
    def key(point):
        return (round(point[0], decimals), round(point[1], decimals))

    adjacency: dict[tuple, list[int]] = {}
    for idx, (p, q) in enumerate(segments):
        adjacency.setdefault(key(p), []).append(idx)
        adjacency.setdefault(key(q), []).append(idx)

    used = [False] * len(segments)
    polylines = []
    for idx in range(len(segments)):
        if used[idx]:
            continue
        used[idx] = True
        p, q = segments[idx]
        chain = [p, q]
        for grow_tail in (True, False):
            while True:
                end = chain[-1] if grow_tail else chain[0]
                candidates = [s for s in adjacency.get(key(end), []) if not used[s]]
                if not candidates:
                    break
                nxt = candidates[0]
                used[nxt] = True
                a, b = segments[nxt]
                other = b if key(a) == key(end) else a
                if grow_tail:
                    chain.append(other)
                else:
                    chain.insert(0, other)
        polylines.append(np.array(chain, dtype=float))
    return polylines
