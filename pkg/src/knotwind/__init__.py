"""Gauss-code diagrams for knots in (genus-g surface) x (circle).

The package computes with plane diagrams carrying double-line markers: the
move calculus, integer and homology-valued crossing labels, winding
parities with an executable axiom checker, and the universal group every
parity factors through.
"""

from .abelian import (
    FgAbelianGroup,
    GroupElement,
    Hom,
    InconsistencyWitness,
    det,
    quotient,
    smith_normal_form,
    solve_hom,
)
from .diagram import (
    CrossingLabel,
    Diagram,
    HalfCurveClass,
    Jump,
    OVER,
    Passage,
    UNDER,
    parse,
    serialize,
)
from .generate import random_diagram, split_seed
from .moves import (
    Correspondence,
    Move,
    MoveTrace,
    TraceStep,
    apply,
    invert,
    list_moves,
    random_walk,
)
from .parity import (
    AxiomReport,
    ParityAssignment,
    check_axioms,
    gaussian_parity,
    homological_parity,
    is_even,
    label_parity,
    label_parity_mod,
    oriented_from,
    project_s1,
    project_sg,
    resolve_parity,
)
from .trace import dump_trace, load_trace, read_trace, write_trace
from .universal import UniversalPresentation, build_universal, factor, presentation_report

__all__ = [
    "CrossingLabel",
    "Correspondence",
    "Diagram",
    "FgAbelianGroup",
    "GroupElement",
    "HalfCurveClass",
    "Hom",
    "InconsistencyWitness",
    "Jump",
    "Move",
    "MoveTrace",
    "OVER",
    "Passage",
    "ParityAssignment",
    "AxiomReport",
    "TraceStep",
    "UNDER",
    "UniversalPresentation",
    "apply",
    "build_universal",
    "check_axioms",
    "det",
    "dump_trace",
    "factor",
    "gaussian_parity",
    "homological_parity",
    "invert",
    "is_even",
    "label_parity",
    "label_parity_mod",
    "list_moves",
    "load_trace",
    "oriented_from",
    "parse",
    "presentation_report",
    "project_s1",
    "project_sg",
    "quotient",
    "random_diagram",
    "random_walk",
    "read_trace",
    "resolve_parity",
    "serialize",
    "smith_normal_form",
    "solve_hom",
    "split_seed",
    "write_trace",
]

__version__ = "0.1.0"
