"""Unipotent groups of F-crystals: Witt arithmetic, Dieudonne modules, Newton
polygons, Ekedahl-Oort types and the solvers that compute isogeny types."""
from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
