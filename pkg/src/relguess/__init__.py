"""Guessing linear recurrences from multi-Hankel matrices, and sparse FGLM."""

from .field import DEFAULT_PRIME, QQ, PrimeField, make_field
from .fglm import (PropertyMError, SingularHankelError, SparseMultMatrix, blocked_speedup_bench,
                   load_mult_matrix, mult_matrix_from_gb, solve_shape_basis)
from .guess import (GuessReport, Relation, adaptive_sfglm, classify_relations, guess_prels,
                    lattice_adaptive_sfglm, lattice_sfglm, sfglm)
from .monomials import DRL, LEX, MonomialOrder
from .polytext import Names, format_poly, parse_poly
from .skew import SkewPolynomial, skew_buchberger, skew_mul, skew_reduce
from .structures import Cone, GDegreeMap, Lattice
from .tables import ExplicitTable, FunctionTable, WalkCounter, WalkTable, bracket

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRIME", "QQ", "PrimeField", "make_field",
    "PropertyMError", "SingularHankelError", "SparseMultMatrix", "blocked_speedup_bench",
    "load_mult_matrix", "mult_matrix_from_gb", "solve_shape_basis",
    "GuessReport", "Relation", "adaptive_sfglm", "classify_relations", "guess_prels",
    "lattice_adaptive_sfglm", "lattice_sfglm", "sfglm",
    "DRL", "LEX", "MonomialOrder", "Names", "format_poly", "parse_poly",
    "SkewPolynomial", "skew_buchberger", "skew_mul", "skew_reduce",
    "Cone", "GDegreeMap", "Lattice",
    "ExplicitTable", "FunctionTable", "WalkCounter", "WalkTable", "bracket",
]
