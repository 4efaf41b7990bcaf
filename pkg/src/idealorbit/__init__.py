"""Orbit containment sets for polynomial automorphisms.

The package computes ``S(I, J) = {n : sigma^n(I) ⊇ J}`` for an automorphism
``sigma`` of a polynomial ring (optionally modulo a defining ideal), fits its
arithmetic-progression structure, and certifies residue classes with p-adic
arcs and Strassman bounds.
"""

__version__ = "0.1.0"

from .domains import QQ, ZZ, PadicInts, PrimeField, RationalFunctionField, parse_domain
from .dynamics import PolyMap, compose, dyn_eval, iterate, jacobian, jacobian_at, verify_automorphism
from .errors import IdealOrbitError, ValidationError
from .groebner import Ideal, buchberger, contains, eliminate, normal_form, preimage_ideal
from .orbit import analyze, certify, fit_sml, good_prime, scan
from .polynomial import GREVLEX, LEX, Elimination, PolyRing, Polynomial
from .parser import parse_poly

__all__ = [
    "__version__",
    "QQ",
    "ZZ",
    "PadicInts",
    "PrimeField",
    "RationalFunctionField",
    "parse_domain",
    "PolyMap",
    "compose",
    "dyn_eval",
    "iterate",
    "jacobian",
    "jacobian_at",
    "verify_automorphism",
    "IdealOrbitError",
    "ValidationError",
    "Ideal",
    "buchberger",
    "contains",
    "eliminate",
    "normal_form",
    "preimage_ideal",
    "analyze",
    "certify",
    "fit_sml",
    "good_prime",
    "scan",
    "GREVLEX",
    "LEX",
    "Elimination",
    "PolyRing",
    "Polynomial",
    "parse_poly",
]
