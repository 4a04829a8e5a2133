"""Exact diagrammatic kernel for the Aarhus integral.

Jacobi diagram spaces and their quotient bases, the PBW maps, formal
Gaussian integration, Lie algebra weight systems and the OGL expansion.
"""

from .diagrams import Diagram, strut, theta, wheel, w2
from .errors import AarhusError, ParseError
from .gradedsum import GradedSum

__version__ = "0.1.0"

__all__ = ["AarhusError", "Diagram", "GradedSum", "ParseError",
           "strut", "theta", "w2", "wheel"]
