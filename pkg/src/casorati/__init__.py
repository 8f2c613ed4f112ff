"""Exact verification of Casorati and Wronskian determinant identities for classical orthogonal polynomials."""

from .arith import DegenerateMeasure, ForbiddenParameter, IndexOutOfRange, ParamError, Q
from .detcore import IdentityReport, Perturbation, det, det_poly, verify_main, verify_quadratic
from .families import FAMILIES, parse_family
from .poly import ONE, X, Poly

__all__ = [
    "DegenerateMeasure",
    "FAMILIES",
    "ForbiddenParameter",
    "IdentityReport",
    "IndexOutOfRange",
    "ONE",
    "ParamError",
    "Perturbation",
    "Poly",
    "Q",
    "X",
    "det",
    "det_poly",
    "parse_family",
    "verify_main",
    "verify_quadratic",
]

__version__ = "0.1.0"
