"""Agnostic learning of Boolean disjunctions, checked against brute-force oracles at desk scale."""

from .bruteforce import exhaustive_hypothesis_error, opt_enumerate
from .chebyshev import approx_degree, build_approx, certify_approx
from .distributions import EmpiricalSample, ExplicitDistribution, gen_planted, read_examples, write_examples
from .domain import BitVector, MonotoneDisjunction, hypothesis_error
from .sqoracle import SqOracle

__version__ = "0.1.0"

__all__ = [
    "BitVector", "EmpiricalSample", "ExplicitDistribution", "MonotoneDisjunction", "SqOracle",
    "approx_degree", "build_approx", "certify_approx", "exhaustive_hypothesis_error", "gen_planted",
    "hypothesis_error", "opt_enumerate", "read_examples", "write_examples",
]
