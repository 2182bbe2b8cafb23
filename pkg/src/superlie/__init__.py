"""Exact computer algebra for linearly compact Lie superalgebras."""
from __future__ import annotations

from .core import JetContext, LaurentContext, SuperMonomial, SuperPolynomial, parse_poly, poly_mul
from .errors import ContextMismatchError, InconclusiveError, NotInImageError, SeriesSpecError, SuperLieError
from .fields import SuperVectorField, apply, bracket, divergence, parse_field
from .forms import DifferentialForm, closed_basis, contract, ext_d, lie_derivative, twisted_action, wedge
from .series import SeriesSpec, filtration_dims, membership, series_basis

__version__ = "0.1.0"

__all__ = [
    "JetContext", "LaurentContext", "SuperMonomial", "SuperPolynomial", "parse_poly", "poly_mul",
    "SuperLieError", "ContextMismatchError", "InconclusiveError", "NotInImageError", "SeriesSpecError",
    "SuperVectorField", "apply", "bracket", "divergence", "parse_field",
    "DifferentialForm", "closed_basis", "contract", "ext_d", "lie_derivative", "twisted_action", "wedge",
    "SeriesSpec", "filtration_dims", "membership", "series_basis",
]
