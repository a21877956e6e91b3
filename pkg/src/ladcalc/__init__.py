"""Local action diagrams of (P)-closed groups acting on trees."""

from .lad import Diagram, load, save, validate
from .scopo import classify
from .discrete import decide

__all__ = ["Diagram", "load", "save", "validate", "classify", "decide"]
__version__ = "0.1.0"
