"""Numerical laboratory for a glued derived-from-Anosov surface diffeomorphism."""

from bitorus.surface import (
    Atlas,
    ChartSpec,
    PolarRect,
    SurfacePoint,
    d_rect,
    default_atlas,
    inversion,
    point,
)

__all__ = [
    "Atlas",
    "ChartSpec",
    "PolarRect",
    "SurfacePoint",
    "d_rect",
    "default_atlas",
    "inversion",
    "point",
]
