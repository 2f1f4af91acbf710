"""Exact engine for tropical manifolds, tropical vertex algebras and scattering diagrams."""
from __future__ import annotations

__version__ = "0.1.0"
