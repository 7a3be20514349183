"""Diagram and region data model, mutations, geometry and file output."""
from .base import (
    BaseDiagram2D,
    BaseRegion3D,
    Cut,
    Polytope,
    RhombusHeightField,
    contains,
    lattice_region,
    region_area,
    region_volume,
)
from .emit import emit, load, read_csv, read_obj, render
from .maps import PRESETS, Piece, PiecewiseUnimodularMap, apply_map, preset

__all__ = [
    "BaseDiagram2D",
    "BaseRegion3D",
    "Cut",
    "PRESETS",
    "Piece",
    "PiecewiseUnimodularMap",
    "Polytope",
    "RhombusHeightField",
    "apply_map",
    "contains",
    "emit",
    "lattice_region",
    "load",
    "preset",
    "read_csv",
    "read_obj",
    "region_area",
    "region_volume",
    "render",
]
