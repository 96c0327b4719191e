"""Sharp-constant oracles and numerical checks for weighted uncertainty principles."""

from .exponents import INF, ExponentPair
from .weights import BrokenWeight

__version__ = "0.1.0"

__all__ = ["INF", "BrokenWeight", "ExponentPair", "__version__"]
