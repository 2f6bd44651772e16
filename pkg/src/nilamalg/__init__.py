"""Amalgams, dominions and absolute closure in the class-two, exponent p^n variety."""

from .fpgroup import CapExceeded, Element, FpGroup, Morphism, Presentation, Subgroup
from .nil2 import FreeElement, FreeNil2, VarietyParams
from .parser import ParseError, parse

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Element",
    "FpGroup",
    "FreeElement",
    "FreeNil2",
    "Morphism",
    "ParseError",
    "Presentation",
    "Subgroup",
    "VarietyParams",
    "parse",
    "__version__",
]
