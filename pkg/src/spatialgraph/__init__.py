"""Planar diagrams of spatial graphs and their low-degree invariants."""

from .diagram import Diagram, DiagramError, HandcuffDiagram, P4Diagram, parse, serialize, validate
from .invariants import a2, conway, linking_number, n_invariant, xi
from .surgery import d_sum, gen_frs, gen_hrs

__version__ = "0.1.0"

__all__ = [
    "Diagram", "DiagramError", "HandcuffDiagram", "P4Diagram", "parse", "serialize", "validate",
    "a2", "conway", "linking_number", "n_invariant", "xi", "d_sum", "gen_frs", "gen_hrs",
]
