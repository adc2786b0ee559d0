"""SVG figures for the analysis outputs.

Four figure kinds: the perceptual map (product scatter), the appeal
vector over that map with iso-appeal lines, the response-surface
colormap over (d2, d3), and the iso-appeal line chart with the
steepest-ascent field. All outputs are deterministic.
"""
from __future__ import annotations

import numpy as np

from .mds import PerceptualConfiguration
from .prefmap import VectorModelFit, appeal_vector
from .surface import IsoAnalysis, SurfaceGrid
from .svgdraw import axes, frame_for, heat_color


def perceptual_map_svg(config: PerceptualConfiguration, stress: float | None = None) -> str:
    points = config.points
    canvas, frame = frame_for(points[:, 0], points[:, 1])
    axes(canvas, frame, "axis 1", "axis 2")
    canvas.line(frame.x(0), frame.top, frame.x(0), frame.top + frame.plot_height,
                stroke="#cccccc", dash="4,4")
    canvas.line(frame.left, frame.y(0), frame.left + frame.plot_width, frame.y(0),
                stroke="#cccccc", dash="4,4")
    for pid, (x, y) in zip(config.product_ids, points):
        px, py = frame.point(x, y)
        canvas.circle(px, py, 4.0)
        canvas.text(px + 7, py - 5, str(pid), size=10, anchor="start")
    title = "Perceptual map"
    if stress is not None:
        title += f" (stress {stress:.3f})"
    canvas.text(canvas.width / 2, 24, title, size=13)
    return canvas.render()


def appeal_vector_svg(config: PerceptualConfiguration, fit: VectorModelFit,
                      iso_count: int = 7) -> str:
    points = config.points
    canvas, frame = frame_for(points[:, 0], points[:, 1])
    axes(canvas, frame, "axis 1", "axis 2")
    vector = appeal_vector(fit)
    ux, uy = vector.direction
    span = max(frame.x_max - frame.x_min, frame.y_max - frame.y_min)
    half = span * 1.5

    # iso-appeal lines: perpendiculars to the vector through evenly spaced
    # points along the appeal direction
    offsets = np.linspace(-span / 2, span / 2, iso_count)
    for offset in offsets:
        cx, cy = offset * ux, offset * uy
        p1 = (cx - vector.iso_directions[0] * half, cy - vector.iso_directions[1] * half)
        p2 = (cx + vector.iso_directions[0] * half, cy + vector.iso_directions[1] * half)
        clipped = _clip_segment(p1, p2, frame)
        if clipped:
            (x1, y1), (x2, y2) = clipped
            canvas.line(frame.x(x1), frame.y(y1), frame.x(x2), frame.y(y2),
                        stroke="#b8cbe0", width=1.0)

    for pid, (x, y) in zip(config.product_ids, points):
        px, py = frame.point(x, y)
        canvas.circle(px, py, 4.0)
        canvas.text(px + 7, py - 5, str(pid), size=10, anchor="start")

    arrow_len = span * 0.35
    canvas.arrow(frame.x(0), frame.y(0),
                 frame.x(ux * arrow_len), frame.y(uy * arrow_len))
    canvas.text(canvas.width / 2, 24,
                f"Appeal vector (a={fit.a:.2f}, b={fit.b:.2f}, "
                f"R²={fit.r_squared:.2f})", size=13)
    return canvas.render()


def _clip_segment(p1, p2, frame, steps: int = 512):
    """Crude but deterministic clip: keep the sampled sub-span inside the
    frame."""
    t = np.linspace(0.0, 1.0, steps)
    xs = p1[0] + (p2[0] - p1[0]) * t
    ys = p1[1] + (p2[1] - p1[1]) * t
    inside = ((frame.x_min <= xs) & (xs <= frame.x_max)
              & (frame.y_min <= ys) & (ys <= frame.y_max))
    if not inside.any():
        return None
    first, last = np.nonzero(inside)[0][[0, -1]]
    return (xs[first], ys[first]), (xs[last], ys[last])


def surface_colormap_svg(grid: SurfaceGrid, title: str = "Appeal over (d2, d3)") -> str:
    values = grid.values
    canvas, frame = frame_for(grid.d2_values, grid.d3_values, pad_fraction=0.0)
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo or 1.0

    n_rows, n_cols = values.shape
    xs = grid.d2_values
    ys = grid.d3_values
    x_edges = _edges(xs)
    y_edges = _edges(ys)
    for row in range(n_rows):
        for col in range(n_cols):
            x0, x1 = frame.x(x_edges[col]), frame.x(x_edges[col + 1])
            y0, y1 = frame.y(y_edges[row + 1]), frame.y(y_edges[row])
            color = heat_color((values[row, col] - lo) / span)
            canvas.rect(x0, y0, x1 - x0, y1 - y0, fill=color)
    axes(canvas, frame, "d2 (cm)", "d3 (cm)")
    canvas.text(canvas.width / 2, 24, title, size=13)
    # color legend
    legend_x = canvas.width - 36
    for i in range(40):
        t = i / 39.0
        y = frame.top + frame.plot_height * (1 - t) - frame.plot_height / 40
        canvas.rect(legend_x, y, 12, frame.plot_height / 40 + 0.5, fill=heat_color(t))
    canvas.text(legend_x + 6, frame.top - 8, f"{hi:.1f}", size=9)
    canvas.text(legend_x + 6, frame.top + frame.plot_height + 14, f"{lo:.1f}", size=9)
    return canvas.render()


def _edges(centers):
    centers = np.asarray(centers, dtype=float)
    if len(centers) == 1:
        half = 0.5
        return np.array([centers[0] - half, centers[0] + half])
    mid = (centers[1:] + centers[:-1]) / 2
    first = centers[0] - (centers[1] - centers[0]) / 2
    last = centers[-1] + (centers[-1] - centers[-2]) / 2
    return np.concatenate([[first], mid, [last]])


def iso_lines_svg(analysis: IsoAnalysis, title: str = "Iso-appeal lines",
                  field_step: int = 12) -> str:
    grid = analysis.grid
    canvas, frame = frame_for(grid.d2_values, grid.d3_values, pad_fraction=0.0)
    axes(canvas, frame, "d2 (cm)", "d3 (cm)")

    # steepest-ascent field, shown as short unit arrows on a sub-grid
    g2, g3 = analysis.gradient_d2, analysis.gradient_d3
    xs, ys = grid.d2_values, grid.d3_values
    step_x = max(1, len(xs) // field_step)
    step_y = max(1, len(ys) // field_step)
    arrow = min(frame.plot_width, frame.plot_height) / field_step * 0.35
    for row in range(0, len(ys), step_y):
        for col in range(0, len(xs), step_x):
            gx, gy = g2[row, col], g3[row, col]
            norm = float(np.hypot(gx, gy))
            if norm == 0:
                continue
            px, py = frame.point(xs[col], ys[row])
            canvas.line(px, py, px + arrow * gx / norm, py - arrow * gy / norm,
                        stroke="#999999", width=0.8)

    palette = ("#1f5fa8", "#c0392b", "#1e8449", "#7d3c98", "#b7950b", "#148f77")
    for index, line in enumerate(analysis.lines):
        color = palette[index % len(palette)]
        for polyline in line.polylines:
            canvas.polyline([frame.point(x, y) for x, y in polyline], stroke=color)
        if line.polylines:
            x, y = line.polylines[0][0]
            canvas.text(frame.x(x), frame.y(y) - 6, f"{line.level:g}", size=9, fill=color)
    canvas.text(canvas.width / 2, 24, title, size=13)
    return canvas.render()
