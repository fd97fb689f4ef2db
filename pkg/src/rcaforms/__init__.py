"""Contravariant forms, signature characters and KZ monodromy for rational Cherednik algebras
of real reflection groups."""

from .coxeter import CoxeterDatum, ParamPoint, build_coxeter
from .irreps import WIrrep, get_irrep, irreps_of

__version__ = "0.1.0"

__all__ = ["CoxeterDatum", "ParamPoint", "WIrrep", "build_coxeter", "get_irrep", "irreps_of", "__version__"]
