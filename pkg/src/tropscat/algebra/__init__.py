"""Truncated local model rings, log derivations and the tropical vertex group."""
from __future__ import annotations

from .group import VertexGroupElement, exp_action, wall_action_closed_form
from .laurent import Laurent, RingElement, log_one_plus
from .lie import (
    LieElement,
    Polyvector,
    bracket,
    bv_delta,
    check_bv_identity,
    divergence,
    gerstenhaber,
    is_divergence_free,
)
from .monoid import ConvexPL, MonoidElement, ToricMonoid
from .slab import SlabElement, SlabUV, bv_delta_slab, cross_slab
from .text import format_function, format_lie, parse_element, parse_function, parse_lie

__all__ = [
    "Laurent", "RingElement", "log_one_plus", "LieElement", "Polyvector", "bracket", "bv_delta",
    "check_bv_identity", "divergence", "gerstenhaber", "is_divergence_free", "VertexGroupElement",
    "exp_action", "wall_action_closed_form", "SlabUV", "SlabElement", "bv_delta_slab", "cross_slab",
    "ToricMonoid", "MonoidElement", "ConvexPL", "format_function", "format_lie", "parse_function",
    "parse_lie", "parse_element",
]
