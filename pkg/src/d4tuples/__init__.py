"""Certified computations for D(4)-tuples extending the pairs {a, b} and {a+1, b}."""

from .arith import CertifiedReal, Sign, real
from .errors import D4Error, DomainError, PrecisionError, ResourceError
from .pell import b1, b2, b3, b_nu, find_intersections, pair_context
from .reduction import brute_force_oracle, reduce_pair
from .tuples import DTriple, d_minus, is_d4_tuple, regular_extensions

__version__ = "0.1.0"

__all__ = [
    "CertifiedReal", "Sign", "real",
    "D4Error", "DomainError", "PrecisionError", "ResourceError",
    "b1", "b2", "b3", "b_nu", "find_intersections", "pair_context",
    "brute_force_oracle", "reduce_pair",
    "DTriple", "d_minus", "is_d4_tuple", "regular_extensions",
]
