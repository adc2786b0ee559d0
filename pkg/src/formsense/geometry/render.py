"""2D SVG rendering of glass profiles for stimuli display.

Output is deterministic: fixed float precision, no timestamps, stable
element order. The profile is drawn mirrored across the axis of
revolution, two paths per side (outer outline and inner wall).
"""
from __future__ import annotations

import numpy as np

from .profile import GlassShape

_PRECISION = 4
_MARGIN_FRACTION = 0.06


def _fmt(value: float) -> str:
    text = f"{value:.{_PRECISION}f}"
    return "-0.0000" if text == "-0.0000" else text


def _path(points, flip: bool) -> str:
    commands = []
    for index, (x, y) in enumerate(points):
        letter = "M" if index == 0 else "L"
        commands.append(f"{letter} {_fmt(-x if flip else x)} {_fmt(y)}")
    return " ".join(commands)


def profile_svg(shape: GlassShape, stroke: str = "#2a2a33",
                fill: str = "#dce9f2") -> str:
    """Render the profile as standalone SVG 1.1 text.

    Geometry is emitted in centimetres: the viewBox spans the full
    height (base + foot + container) and the widest diameter.
    """
    z_max = float(shape.outer[:, 1].max())
    height = shape.z_extent
    r_max = shape.max_radius
    width = 2.0 * r_max
    margin = _MARGIN_FRACTION * max(width, height)

    def to_canvas(points):
        # SVG y runs downward; profiles are drawn rim-up
        return [(float(r), z_max - float(z)) for r, z in points]

    outer = to_canvas(shape.outer)
    inner = to_canvas(shape.inner)

    # higher precision here: the box ratio encodes the real aspect ratio
    view = (
        f"{-r_max - margin:.8f} {-margin:.8f} "
        f"{width + 2 * margin:.8f} {height + 2 * margin:.8f}"
    )
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{view}">',
        f'<g stroke="{stroke}" stroke-width="{_fmt(0.05)}">',
    ]
    # two paths per mirrored side: the outer outline and the inner wall
    for flip in (False, True):
        parts.append(f'<path d="{_path(outer, flip)}" fill="{fill}"/>')
        parts.append(f'<path d="{_path(inner, flip)}" fill="none"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
