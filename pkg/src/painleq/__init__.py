"""Point-equivalence tests for Painleve I, II and III with three zero
parameters, with explicit changes of variables built from differential
invariants."""

from .exprkernel import (DEFAULT_SEED, X, Y, P, ZeroVerdict, differentiate,
                         evaluate_numeric, is_identically_zero, normalize,
                         substitute)
from .parsing import (OdeCubic, parse_expression, extract_cubic_coefficients,
                      to_grammar)
from .invariants import InvariantPipeline, Pseudo, BranchChoice, WEIGHTS
from .classify import (Classification, InvariantReport, check_painleve1,
                       check_painleve2, check_painleve3zero, classify)
from .transform import (PointMap, map_painleve1, map_painleve2, pullback_ode,
                        verify_map)
from . import canonical

__all__ = [
    "DEFAULT_SEED", "X", "Y", "P", "ZeroVerdict", "differentiate",
    "evaluate_numeric", "is_identically_zero", "normalize", "substitute",
    "OdeCubic", "parse_expression", "extract_cubic_coefficients", "to_grammar",
    "InvariantPipeline", "Pseudo", "BranchChoice", "WEIGHTS",
    "Classification", "InvariantReport", "check_painleve1", "check_painleve2",
    "check_painleve3zero", "classify",
    "PointMap", "map_painleve1", "map_painleve2", "pullback_ode", "verify_map",
    "canonical",
]

__version__ = "0.1.0"
