"""Surfaces of revolution and mesh export.

The glass solid is obtained by rotating the outer profile about the z
axis. The profile already starts on the axis; a top-cap point closes it
at the rim so the revolved mesh is watertight (sphere topology).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .profile import GlassShape

_AXIS_EPS = 1e-9


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3)
    triangles: np.ndarray  # (F, 3) vertex indices

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def edge_count(self) -> int:
        edges = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                edges.add((u, v) if u < v else (v, u))
        return len(edges)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count() + self.triangle_count

    def volume(self) -> float:
        """Signed volume from the divergence theorem (positive for
        outward-oriented closed meshes)."""
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return float(np.sum(np.einsum("ij,ij->i", a, np.cross(b, c))) / 6.0)

    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def to_stl(self, name: str = "glass") -> str:
        """ASCII STL with recomputed facet normals."""
        lines = [f"solid {name}"]
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        normals = np.cross(b - a, c - a)
        lengths = np.linalg.norm(normals, axis=1)
        lengths[lengths == 0] = 1.0
        normals = normals / lengths[:, None]
        for n, va, vb, vc in zip(normals, a, b, c):
            lines.append(f"  facet normal {n[0]:.6e} {n[1]:.6e} {n[2]:.6e}")
            lines.append("    outer loop")
            for v in (va, vb, vc):
                lines.append(f"      vertex {v[0]:.6e} {v[1]:.6e} {v[2]:.6e}")
            lines.append("    endloop")
            lines.append("  endfacet")
        lines.append(f"endsolid {name}")
        return "\n".join(lines) + "\n"


def revolve_polyline(profile: np.ndarray, angular_segments: int) -> TriangleMesh:
    """Revolve an (r, z) polyline about the z axis.

    The polyline must start and end on the axis (r = 0) to produce a
    closed mesh. Off-axis samples become rings of ``angular_segments``
    vertices; axis samples collapse to single vertices.
    """
    if angular_segments < 3:
        raise ValueError("need at least 3 angular segments")
    angles = np.linspace(0.0, 2.0 * np.pi, angular_segments, endpoint=False)
    cos, sin = np.cos(angles), np.sin(angles)

    vertices = []
    rings = []  # per profile point: ("axis", index) or ("ring", start index)
    for r, z in profile:
        if r <= _AXIS_EPS:
            rings.append(("axis", len(vertices)))
            vertices.append((0.0, 0.0, z))
        else:
            rings.append(("ring", len(vertices)))
            vertices.extend(zip(r * cos, r * sin, np.full_like(cos, z)))

    # winding chosen so normals point outward for a base->rim profile
    triangles = []
    m = angular_segments
    for (kind_a, base_a), (kind_b, base_b) in zip(rings[:-1], rings[1:]):
        if kind_a == "axis" and kind_b == "axis":
            continue
        if kind_a == "axis":
            for s in range(m):
                triangles.append((base_a, base_b + (s + 1) % m, base_b + s))
        elif kind_b == "axis":
            for s in range(m):
                triangles.append((base_a + s, base_a + (s + 1) % m, base_b))
        else:
            for s in range(m):
                s1 = (s + 1) % m
                triangles.append((base_a + s, base_b + s1, base_b + s))
                triangles.append((base_a + s, base_a + s1, base_b + s1))
    return TriangleMesh(
        vertices=np.array(vertices, dtype=float),
        triangles=np.array(triangles, dtype=int),
    )


def revolve(shape: GlassShape, angular_segments: int = 64) -> TriangleMesh:
    """Watertight mesh of the revolved outer profile (rim capped flat)."""
    profile = shape.outer
    closed = [profile]
    if profile[0, 0] > _AXIS_EPS:
        closed.insert(0, np.array([[0.0, profile[0, 1]]]))
    if profile[-1, 0] > _AXIS_EPS:
        closed.append(np.array([[0.0, profile[-1, 1]]]))
    return revolve_polyline(np.vstack(closed), angular_segments)
