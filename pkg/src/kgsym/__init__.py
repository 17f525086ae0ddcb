"""kgsym: exact verification of the conformal symmetry classification of the
Klein-Gordon equation on flat 3-space (Euclidean and Minkowski signature)."""

from .kernel import (
    Expr,
    JetVar,
    diff,
    total_diff,
    substitute,
    is_zero,
)
from .grammar import parse, to_string

__all__ = [
    "Expr",
    "JetVar",
    "parse",
    "to_string",
    "diff",
    "total_diff",
    "substitute",
    "is_zero",
]

__version__ = "0.1.0"
