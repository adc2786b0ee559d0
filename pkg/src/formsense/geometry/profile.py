"""Parametric glass profiles.

A profile is one planar curve in (r, z) running from the centre of the
base, around the base plate, up the stem (foot), and up the bowl
(container) to the rim. It is modelled by 15 control nodes split into
three sections -- base P1..P5, foot P5..P9, container P9..P15 -- each
interpolated by a cubic spline in arc parameter. The sections share
their junction tangents at P5 and P9, which makes the assembled curve
tangent-continuous there.

Instantiating the template for design parameters (d1, d2, d3) re-scales
the sections: the foot is stretched so its height is d2, the container
so its height is d1, and all radii so the sampled container diameter is
exactly d3. The base keeps its template height. The bowl's inner wall
is the outer container curve offset inward by the wall gap of 0.1 cm,
clipped at the rim.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline

from ..core.types import RULES, DesignParams
from ..errors import DegenerateShapeError

WALL_GAP = 0.1  # cm between outer and inner container surfaces

_BASE = slice(0, 5)
_FOOT = slice(4, 9)
_CONTAINER = slice(8, 15)


@dataclass(frozen=True)
class ProfileTemplate:
    """15 control nodes in template units, continuity at P5 and P9."""

    nodes: np.ndarray
    continuity_nodes: tuple[int, int] = (4, 8)
    name: str = "balloon-glass"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.shape != (15, 2):
            raise ValueError(f"template needs exactly 15 (r,z) nodes, got {nodes.shape}")
        if abs(nodes[0, 0]) > 1e-12 or abs(nodes[0, 1]) > 1e-12:
            raise ValueError("first node must sit on the axis at (0, 0)")
        if np.any(nodes[:, 0] < 0):
            raise ValueError("node radii must be nonnegative")
        foot_z = nodes[_FOOT, 1]
        if np.any(np.diff(foot_z) < 0):
            raise ValueError("z must be nondecreasing along the foot")
        if tuple(self.continuity_nodes) != (4, 8):
            raise ValueError("continuity nodes are P5 and P9 (indices 4 and 8)")
        object.__setattr__(self, "nodes", nodes)

    @property
    def base_height(self) -> float:
        return float(self.nodes[4, 1] - self.nodes[0, 1])

    @property
    def foot_height(self) -> float:
        return float(self.nodes[8, 1] - self.nodes[4, 1])

    @property
    def container_height(self) -> float:
        return float(self.nodes[14, 1] - self.nodes[8, 1])

    @property
    def container_node_radius(self) -> float:
        return float(self.nodes[_CONTAINER, 0].max())

    def scaled_nodes(self, params: DesignParams) -> np.ndarray:
        """Per-section scaling to the requested dimensions (first pass;
        radii are re-normalized after sampling).

        Sections overlap at the shared junction nodes, so new z values
        are computed from the pristine template before being written.
        """
        template_z = self.nodes[:, 1]
        z_base_top = template_z[4]
        z_foot_top = template_z[8]
        nodes = self.nodes.copy()
        nodes[_FOOT, 1] = z_base_top + (
            (template_z[_FOOT] - z_base_top) * (params.d2 / self.foot_height)
        )
        nodes[_CONTAINER, 1] = (
            z_base_top + params.d2
            + (template_z[_CONTAINER] - z_foot_top) * (params.d1 / self.container_height)
        )
        nodes[:, 0] *= params.d3 / (2.0 * self.container_node_radius)
        return nodes

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "nodes": [[float(r), float(z)] for r, z in self.nodes],
            "continuity_nodes": list(self.continuity_nodes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProfileTemplate":
        return cls(
            nodes=np.array(data["nodes"], dtype=float),
            continuity_nodes=tuple(data.get("continuity_nodes", (4, 8))),
            name=data.get("name", "template"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ProfileTemplate":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GlassShape:
    """Sampled profile of one instantiated glass.

    ``outer`` runs base -> rim; ``inner`` is the offset container wall.
    ``section_bounds`` are the outer-array index ranges of (base, foot,
    container); ``tangents`` are unit tangents at the outer samples.
    """

    template: ProfileTemplate
    params: DesignParams
    outer: np.ndarray
    inner: np.ndarray
    tangents: np.ndarray
    section_bounds: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    @property
    def container_points(self) -> np.ndarray:
        lo, hi = self.section_bounds[2]
        return self.outer[lo:hi]

    @property
    def container_tangents(self) -> np.ndarray:
        lo, hi = self.section_bounds[2]
        return self.tangents[lo:hi]

    @property
    def z_extent(self) -> float:
        return float(self.outer[:, 1].max() - self.outer[:, 1].min())

    @property
    def max_radius(self) -> float:
        return float(self.outer[:, 0].max())

    @property
    def container_z_extent(self) -> float:
        pts = self.container_points
        return float(pts[:, 1].max() - pts[:, 1].min())

    @property
    def max_container_diameter(self) -> float:
        return float(2.0 * self.container_points[:, 0].max())


def apply_rule(params: DesignParams, rule: str, delta: float) -> DesignParams:
    """Apply one shape-regulating rule: increase a single dimension.

    R1 raises the container height d1, R2 the foot height d2, R3 the
    container diameter d3.
    """
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    if not delta > 0:
        raise ValueError(f"rules are increase rules; delta must be > 0, got {delta}")
    fields = {"R1": "d1", "R2": "d2", "R3": "d3"}
    name = fields[rule]
    return replace(params, **{name: getattr(params, name) + delta})


def _section_spline(points: np.ndarray, start_tangent=None):
    """Cubic spline through a section's nodes in chord-length parameter.

    The start is clamped to the given unit tangent (shared with the
    previous section); free ends are natural.
    """
    chords = np.sqrt(np.sum(np.diff(points, axis=0) ** 2, axis=1))
    if np.any(chords <= 0):
        raise DegenerateShapeError("coincident adjacent control nodes")
    t = np.concatenate([[0.0], np.cumsum(chords)])
    bc_start = (1, start_tangent) if start_tangent is not None else (2, np.zeros(2))
    spline = CubicSpline(t, points, bc_type=(bc_start, (2, np.zeros(2))))
    return spline, t


def _sample_section(spline, knots, samples_per_segment):
    """Evaluate a section densely, hitting every node parameter exactly."""
    params = [
        np.linspace(knots[s], knots[s + 1], samples_per_segment + 1)[:-1]
        for s in range(len(knots) - 1)
    ]
    t = np.concatenate(params + [knots[-1:]])
    points = spline(t)
    tangents = spline(t, 1)
    return points, tangents


def generate_profile(template: ProfileTemplate, params: DesignParams,
                     samples_per_segment: int = 24) -> GlassShape:
    """Instantiate the template at the given dimensions and sample it.

    Raises DegenerateShapeError when the inner wall offset would cross
    the axis of revolution or the outline self-intersects.
    """
    if samples_per_segment < 2:
        raise ValueError("samples_per_segment must be >= 2")
    nodes = template.scaled_nodes(params)

    sections = []
    tangent = None
    for section in (_BASE, _FOOT, _CONTAINER):
        spline, knots = _section_spline(nodes[section], tangent)
        points, derivs = _sample_section(spline, knots, samples_per_segment)
        sections.append((points, derivs))
        end = spline(knots[-1], 1)
        tangent = end / np.linalg.norm(end)

    bounds = []
    outer_parts, tangent_parts = [], []
    cursor = 0
    for index, (points, derivs) in enumerate(sections):
        if index > 0:
            points, derivs = points[1:], derivs[1:]  # junction node already present
            lo = cursor - 1
        else:
            lo = 0
        outer_parts.append(points)
        tangent_parts.append(derivs)
        cursor += len(points)
        bounds.append((lo, cursor))
    outer = np.vstack(outer_parts)
    tangents = np.vstack(tangent_parts)

    # exact diameter normalization: spline overshoot makes the sampled
    # container maximum differ slightly from the node maximum
    lo, hi = bounds[2]
    sampled_max = outer[lo:hi, 0].max()
    if sampled_max <= 0:
        raise DegenerateShapeError("container radius collapsed to zero")
    outer[:, 0] *= (params.d3 / 2.0) / sampled_max
    tangents[:, 0] *= (params.d3 / 2.0) / sampled_max
    norms = np.linalg.norm(tangents, axis=1)
    tangents = tangents / norms[:, None]

    inner = _inner_offset(outer[lo:hi], tangents[lo:hi])
    if np.any(inner[:, 0] < 0):
        raise DegenerateShapeError(
            "inner wall crosses the axis of revolution; "
            f"container too narrow for the {WALL_GAP} cm wall gap")
    if _self_intersects(outer):
        raise DegenerateShapeError("outer profile self-intersects")

    return GlassShape(
        template=template, params=params, outer=outer, inner=inner,
        tangents=tangents, section_bounds=tuple(bounds),
    )


def _inner_offset(container_points, container_tangents):
    """Offset the container curve along inward normals, clipped at the rim.

    For the upward-running curve the inward normal is the tangent
    rotated a quarter turn toward the axis.
    """
    normals = np.column_stack([-container_tangents[:, 1], container_tangents[:, 0]])
    inner = container_points + WALL_GAP * normals
    rim_z = container_points[-1, 1]
    return inner[inner[:, 1] <= rim_z + 1e-12]


def _self_intersects(polyline: np.ndarray) -> bool:
    """Exact segment-pair crossing test (adjacent segments excluded)."""
    p = polyline[:-1]
    q = polyline[1:]
    count = len(p)

    def orient(a, b, c):
        return (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])

    for s in range(count - 2):
        a = np.broadcast_to(p[s], (count - s - 2, 2))
        b = np.broadcast_to(q[s], (count - s - 2, 2))
        c = p[s + 2:]
        d = q[s + 2:]
        o1 = orient(a, b, c)
        o2 = orient(a, b, d)
        o3 = orient(c, d, a)
        o4 = orient(c, d, b)
        crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
        if np.any(crossing):
            return True
    return False


def default_template() -> ProfileTemplate:
    from ..core.fixtures import load_fixture_template

    return ProfileTemplate.from_dict(load_fixture_template())
