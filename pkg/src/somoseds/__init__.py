"""Exact arithmetic for Somos-4/5 sequences and elliptic divisibility sequences."""

__version__ = "1.0.0"

from .exactring import (
    BadReductionError,
    BudgetExceededError,
    ExactMathError,
    LaurentElem,
    NotDivisibleError,
    QuadElem,
    ResidueInt,
    SparsePoly,
    ZeroDenominatorError,
    ZeroDivisorError,
)
from .somos import SeqWindow, SomosSpec, extend, laurent_spec, poly_unit_spec, unit_spec
