"""Legendrian contact homology of knots given by front diagrams."""

from .diagram import FrontDiagram, FrontError, parse_front, load_front, resolve, classical_invariants, maslov_potential

__all__ = [
    "FrontDiagram",
    "FrontError",
    "parse_front",
    "load_front",
    "resolve",
    "classical_invariants",
    "maslov_potential",
]
