from .profile import (
    WALL_GAP,
    GlassShape,
    ProfileTemplate,
    apply_rule,
    default_template,
    generate_profile,
)
from .mesh import TriangleMesh, revolve, revolve_polyline
from .render import profile_svg

__all__ = [
    "WALL_GAP",
    "GlassShape",
    "ProfileTemplate",
    "TriangleMesh",
    "apply_rule",
    "default_template",
    "generate_profile",
    "profile_svg",
    "revolve",
    "revolve_polyline",
]
