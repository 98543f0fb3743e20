"""Combinatorial classification of Morse-Smale flows on closed 3-manifolds."""

from .errors import (
    DomainError,
    InvalidGraph,
    InvalidOperation,
    MS3Error,
    NoReturnError,
    ParseError,
    ValidationError,
)
from .words import CyclicWord, Letter, canonical_form, invert, lists_equivalent, rotate_equal, slw_equivalent, word
from .framed import (
    INF,
    FrameType,
    Move,
    MSGraph,
    Role,
    apply_operation,
    classify,
    framings_equivalent,
    normalize_type1,
    oracle_equivalent,
)
from .model import (
    EdgeRecord,
    FlowPresentation,
    HandleRecord,
    SurfaceRegion,
    TauInvariant,
    relabel,
    validate_presentation,
)
from .local import TorusPoint, first_return
from .equivalence import Isomorphism, check_isomorphism, explain_inequivalence, find_equivalence, tau_equivalent
from .catalog import builtin, catalog_keys, from_key, trivial_orbit_flow, twisted_orbit_flow
from .textformat import parse_flow, serialize

__version__ = "0.1.0"

__all__ = [
    "DomainError", "InvalidGraph", "InvalidOperation", "MS3Error", "NoReturnError", "ParseError",
    "ValidationError",
    "CyclicWord", "Letter", "canonical_form", "invert", "lists_equivalent", "rotate_equal",
    "slw_equivalent", "word",
    "INF", "FrameType", "Move", "MSGraph", "Role", "apply_operation", "classify",
    "framings_equivalent", "normalize_type1", "oracle_equivalent",
    "EdgeRecord", "FlowPresentation", "HandleRecord", "SurfaceRegion", "TauInvariant", "relabel",
    "validate_presentation",
    "TorusPoint", "first_return",
    "Isomorphism", "check_isomorphism", "explain_inequivalence", "find_equivalence", "tau_equivalent",
    "builtin", "catalog_keys", "from_key", "trivial_orbit_flow", "twisted_orbit_flow",
    "parse_flow", "serialize",
]
