"""Scattering diagrams: walls, slabs, joints, chambers, consistency and completion."""
from __future__ import annotations

from .consistency import (
    ConsistencyReport,
    JointResult,
    apply_path,
    chart_change,
    check_consistency,
    complete,
    initial_diagram,
    path_crossings,
    path_product,
    worker_count,
)
from .decompose import Chamber, Crossing, Decomposition, Joint, decompose, find_joints
from .diagram import PLANE, DiagramError, ScatteringDiagram, Slab, Wall, diagram_from_json, line_wall
from .geometry import Support

__all__ = [
    "ConsistencyReport", "JointResult", "apply_path", "chart_change", "check_consistency", "complete",
    "initial_diagram", "path_crossings", "path_product", "worker_count", "Chamber", "Crossing", "Decomposition", "Joint",
    "decompose", "find_joints", "PLANE", "DiagramError", "ScatteringDiagram", "Slab", "Wall",
    "diagram_from_json", "line_wall", "Support",
]
