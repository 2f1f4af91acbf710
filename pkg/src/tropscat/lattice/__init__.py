"""Exact lattice geometry: linear algebra, polyhedra, cones and fans."""
from __future__ import annotations

from .fan import Cone, Fan, is_elementary, is_standard_simplex, localize_fan, normal_fan
from .polyhedron import Polyhedron, simplex

__all__ = ["Cone", "Fan", "Polyhedron", "simplex", "normal_fan", "localize_fan",
           "is_standard_simplex", "is_elementary"]
