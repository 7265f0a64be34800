"""Exact construction and verification of a basis of logarithmic derivations
for the coned extended Catalan arrangement of type B."""

from .catalan_core import (
    ArrangementParams,
    Derivation,
    HyperplaneFamily,
    basis,
    derivation_delta,
    euler,
    generator_F,
    h_poly,
    hyperplanes,
    phi_poly,
    psi,
    psi_coned,
)
from .exact_poly import LinearForm, PolyMatrix, Polynomial, determinant
from .verifier import VerificationReport, check_membership, saito_check

__version__ = "0.1.0"

__all__ = [
    "ArrangementParams",
    "Derivation",
    "HyperplaneFamily",
    "LinearForm",
    "PolyMatrix",
    "Polynomial",
    "VerificationReport",
    "basis",
    "check_membership",
    "derivation_delta",
    "determinant",
    "euler",
    "generator_F",
    "h_poly",
    "hyperplanes",
    "phi_poly",
    "psi",
    "psi_coned",
    "saito_check",
]
