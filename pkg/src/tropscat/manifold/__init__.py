"""Integral tropical manifolds: cells, charts, fan structures and the singular locus."""
from __future__ import annotations

from .complex import (Arrow, Cell, IntegralTropicalManifold, SchemaError, build_manifold,
                      global_chart, manifold_from_json)
from .singular import SingularStratum, check_closure, singular_locus, stratum_closure
from .validate import ValidationReport, check_strict_convexity, kinks, validate_manifold

__all__ = ["Arrow", "Cell", "IntegralTropicalManifold", "SchemaError", "build_manifold", "global_chart",
           "manifold_from_json", "SingularStratum", "check_closure", "singular_locus", "stratum_closure",
           "ValidationReport", "check_strict_convexity", "kinks", "validate_manifold"]
