"""Minimal deterministic SVG plotting primitives.

Hand-rolled on purpose: figure output must be byte-stable across runs,
so no plotting library (embedded ids, timestamps, font metrics) is used.
All coordinates are emitted with fixed precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


def fmt(value: float) -> str:
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


@dataclass
class Canvas:
    """Accumulates SVG elements in a fixed pixel coordinate system."""

    width: float
    height: float
    elements: list[str] = field(default_factory=list)

    def line(self, x1, y1, x2, y2, stroke="#444444", width=1.0, dash=None):
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"{dash_attr}/>'
        )

    def polyline(self, points, stroke="#1f5fa8", width=1.5):
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self.elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}"/>'
        )

    def circle(self, cx, cy, r, fill="#1f5fa8", stroke="none"):
        self.elements.append(
            f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def rect(self, x, y, w, h, fill, stroke="none"):
        self.elements.append(
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, x, y, content, size=11.0, anchor="middle", fill="#222222"):
        self.elements.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{fmt(size)}" '
            f'font-family="sans-serif" text-anchor="{anchor}" fill="{fill}">'
            f"{escape(content)}</text>"
        )

    def arrow(self, x1, y1, x2, y2, stroke="#c0392b", width=2.0, head=8.0):
        self.line(x1, y1, x2, y2, stroke=stroke, width=width)
        angle = math.atan2(y2 - y1, x2 - x1)
        for side in (-1, 1):
            tip = angle + math.pi + side * math.radians(25)
            self.line(x2, y2, x2 + head * math.cos(tip), y2 + head * math.sin(tip),
                      stroke=stroke, width=width)

    def raw(self, element: str):
        self.elements.append(element)

    def render(self) -> str:
        body = "\n".join(self.elements)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{fmt(self.width)}" height="{fmt(self.height)}" '
            f'viewBox="0 0 {fmt(self.width)} {fmt(self.height)}">\n'
            f'<rect x="0" y="0" width="{fmt(self.width)}" height="{fmt(self.height)}" '
            'fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )


def escape(text: str) -> str:
    return (str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


@dataclass(frozen=True)
class Frame:
    """Maps data coordinates into a margined plot area (y flipped)."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    left: float
    top: float
    plot_width: float
    plot_height: float

    def x(self, value: float) -> float:
        span = self.x_max - self.x_min or 1.0
        return self.left + (value - self.x_min) / span * self.plot_width

    def y(self, value: float) -> float:
        span = self.y_max - self.y_min or 1.0
        return self.top + (self.y_max - value) / span * self.plot_height

    def point(self, x: float, y: float) -> tuple[float, float]:
        return self.x(x), self.y(y)


def frame_for(x_values, y_values, width=560.0, height=560.0,
              margin=60.0, pad_fraction=0.08) -> tuple[Canvas, Frame]:
    x_min, x_max = float(min(x_values)), float(max(x_values))
    y_min, y_max = float(min(y_values)), float(max(y_values))
    x_pad = (x_max - x_min or 1.0) * pad_fraction
    y_pad = (y_max - y_min or 1.0) * pad_fraction
    canvas = Canvas(width=width, height=height)
    frame = Frame(
        x_min=x_min - x_pad, x_max=x_max + x_pad,
        y_min=y_min - y_pad, y_max=y_max + y_pad,
        left=margin, top=margin,
        plot_width=width - 2 * margin, plot_height=height - 2 * margin,
    )
    return canvas, frame


def axes(canvas: Canvas, frame: Frame, x_label: str, y_label: str, ticks: int = 5):
    left, top = frame.left, frame.top
    right = left + frame.plot_width
    bottom = top + frame.plot_height
    canvas.rect(left, top, frame.plot_width, frame.plot_height, fill="none", stroke="#888888")
    for i in range(ticks + 1):
        tx = frame.x_min + (frame.x_max - frame.x_min) * i / ticks
        ty = frame.y_min + (frame.y_max - frame.y_min) * i / ticks
        x_pix = frame.x(tx)
        y_pix = frame.y(ty)
        canvas.line(x_pix, bottom, x_pix, bottom + 4, stroke="#888888")
        canvas.text(x_pix, bottom + 16, f"{tx:.2f}", size=9)
        canvas.line(left - 4, y_pix, left, y_pix, stroke="#888888")
        canvas.text(left - 8, y_pix + 3, f"{ty:.2f}", size=9, anchor="end")
    canvas.text(left + frame.plot_width / 2, bottom + 32, x_label, size=11)
    canvas.raw(
        f'<text x="{fmt(16.0)}" y="{fmt(top + frame.plot_height / 2)}" font-size="11.000" '
        f'font-family="sans-serif" text-anchor="middle" fill="#222222" '
        f'transform="rotate(-90 {fmt(16.0)} {fmt(top + frame.plot_height / 2)})">'
        f"{escape(y_label)}</text>"
    )


# five-stop blue->red map, linearly interpolated
_HEAT_STOPS = (
    (0.00, (33, 60, 135)),
    (0.25, (70, 135, 200)),
    (0.50, (240, 240, 220)),
    (0.75, (235, 130, 70)),
    (1.00, (180, 30, 40)),
)


def heat_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_HEAT_STOPS[:-1], _HEAT_STOPS[1:]):
        if t <= t1:
            f = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            rgb = tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#b41e28"
