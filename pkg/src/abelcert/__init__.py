"""Exact computer algebra and certificates for Heisenberg-invariant abelian surface constructions."""

from __future__ import annotations

__version__ = "0.1.0"
