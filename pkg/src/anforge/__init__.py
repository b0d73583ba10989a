"""Certified construction of degree-n number fields with Galois group A_n
unramified over a quadratic field, with prescribed signature."""

from .certificate import Verdict, dumps, verify
from .construct import Instance, Shape, build_shape, discriminant_factored, instantiate
from .forge import BudgetExhausted, Budgets, FieldCount, count_fields, forge
from .intpoly import IntPoly, discriminant, resultant, sturm_count

__all__ = [
    "BudgetExhausted",
    "Budgets",
    "FieldCount",
    "Instance",
    "IntPoly",
    "Shape",
    "Verdict",
    "build_shape",
    "count_fields",
    "discriminant",
    "discriminant_factored",
    "dumps",
    "forge",
    "instantiate",
    "resultant",
    "sturm_count",
    "verify",
]
