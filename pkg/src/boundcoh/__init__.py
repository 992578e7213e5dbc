"""Exact and numerical checks around the boundary cohomology of semisimple groups."""
from .errors import BoundcohError
from .rootsys import CartanDatum, RootSystem, build_root_system

__version__ = "0.1.0"

__all__ = ["BoundcohError", "CartanDatum", "RootSystem", "build_root_system", "__version__"]
