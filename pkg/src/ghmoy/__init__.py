"""Grid homology for MOY graphs presented by graph grid diagrams."""

from __future__ import annotations

from .complex import HAT, MINUS, GridComplex
from .graph import WeightAssignment, diagram_weights, recover_graph
from .grid import GridDiagram, Marking, load_diagram, parse_diagram, validate
from .homology import LaurentPoly, PoincareTable, compare_up_to_shift, euler, homology_dims

__all__ = [
    "HAT",
    "MINUS",
    "GridComplex",
    "GridDiagram",
    "LaurentPoly",
    "Marking",
    "PoincareTable",
    "WeightAssignment",
    "compare_up_to_shift",
    "diagram_weights",
    "euler",
    "homology_dims",
    "load_diagram",
    "parse_diagram",
    "recover_graph",
    "validate",
]

__version__ = "0.1.0"
