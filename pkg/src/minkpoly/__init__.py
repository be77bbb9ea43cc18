"""Closed polygons in Minkowski 3-space, their bending flows, the pseudo-unitary
Gelfand-Tsetlin system and the moment polytope of diagonal lengths."""

__version__ = "0.1.0"

from . import bending, charpoly, errors, io, mink3, polygon, polytope, pseudo_gt  # noqa: E402
from .polygon import Polygon, PolygonSpec, action_angle, reconstruct, sample_polygon  # noqa: E402
from .polytope import build_polytope, is_bounded, lattice_points  # noqa: E402

__all__ = [
    "__version__",
    "bending",
    "charpoly",
    "errors",
    "io",
    "mink3",
    "polygon",
    "polytope",
    "pseudo_gt",
    "Polygon",
    "PolygonSpec",
    "action_angle",
    "reconstruct",
    "sample_polygon",
    "build_polytope",
    "is_bounded",
    "lattice_points",
]
