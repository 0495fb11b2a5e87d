from .ctx import (
    IntegerRing,
    ModRing,
    PLocalRing,
    PolyQuotientRing,
    RingCtx,
    RingElem,
    SamplePolicy,
    SymbolicLaurentRing,
)
from .parse import parse_elem, ring_make
from .qpoly import QPoly
from .rat import Q

__all__ = [
    "IntegerRing",
    "ModRing",
    "PLocalRing",
    "PolyQuotientRing",
    "Q",
    "QPoly",
    "RingCtx",
    "RingElem",
    "SamplePolicy",
    "SymbolicLaurentRing",
    "parse_elem",
    "ring_make",
]
