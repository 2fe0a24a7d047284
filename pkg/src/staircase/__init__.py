"""Bandwidth-efficient secret sharing over nested linear codes."""

from .gf import FiniteField, FieldElement, field_new, gf

__all__ = ["FiniteField", "FieldElement", "field_new", "gf"]
__version__ = "0.1.0"
