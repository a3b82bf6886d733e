"""Sturm meanders, their connection graphs and the 3-nose family."""

from .core import (
    Arc,
    Meander,
    MeanderError,
    Permutation,
    count_noses,
    from_sigma,
    is_meander,
    reverse_rho,
    rotate_kappa,
    suspend,
    validate_dissipative,
    validate_jordan,
)
from .invariants import MorsePolynomial, MorseVector, ZeroMatrix, morse_indices, morse_polynomial, zero_numbers
from .connections import ConnectionGraph, Reversor, connection_graph, find_reversor, graded_isomorphic

__all__ = [
    "Arc",
    "ConnectionGraph",
    "Meander",
    "MeanderError",
    "MorsePolynomial",
    "MorseVector",
    "Permutation",
    "Reversor",
    "ZeroMatrix",
    "connection_graph",
    "count_noses",
    "find_reversor",
    "from_sigma",
    "graded_isomorphic",
    "is_meander",
    "morse_indices",
    "morse_polynomial",
    "reverse_rho",
    "rotate_kappa",
    "suspend",
    "validate_dissipative",
    "validate_jordan",
    "zero_numbers",
]
