"""Integer points on rational plane curves from a rational parametrization."""
from .curve import BinaryFormTriple, find_rational_point, ingest_parametrization, parametrize, singular_points
from .intval import certify_external_triple, is_integer_valued, to_binomial_basis
from .parser import parse_poly
from .pipeline import compute_gcd_bound, eliminate_to_monomial, residue_decompose
from .poly import BinaryForm, MultiPoly, TernaryForm
from .resultant import bezout_cofactors, resultant
from .verify import enumerate_solutions, is_covered, verify_box

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "BinaryFormTriple",
    "MultiPoly",
    "TernaryForm",
    "bezout_cofactors",
    "certify_external_triple",
    "compute_gcd_bound",
    "eliminate_to_monomial",
    "enumerate_solutions",
    "find_rational_point",
    "ingest_parametrization",
    "is_covered",
    "is_integer_valued",
    "parametrize",
    "parse_poly",
    "residue_decompose",
    "resultant",
    "singular_points",
    "to_binomial_basis",
    "verify_box",
]
