"""Morse indices, zero numbers and Morse counts of dissipative meanders."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import MeanderError, Permutation, require_meander


def _sign(x: int) -> int:
    assert x != 0, "sign(0) cannot occur for an injective sigma^{-1}"
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class MorseVector:
    """Morse indices ``i_1..i_N`` in meander order."""

    values: tuple[int, ...]

    @property
    def formal(self) -> bool:
        return min(self.values) < 0

    @property
    def i_min(self) -> int:
        return min(self.values)

    @property
    def i_max(self) -> int:
        return max(self.values)

    def __getitem__(self, j: int) -> int:
        """Morse index of meander vertex ``j`` (1-based)."""
        return self.values[j - 1]

    def __len__(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return {"n": len(self.values), "morse": list(self.values), "formal": self.formal}


def morse_indices(sigma: Permutation) -> MorseVector:
    require_meander(sigma)
    inv = sigma.inverse()
    n = sigma.n
    values = [0]
    for j in range(1, n):
        step = _sign(inv(j + 1) - inv(j))
        values.append(values[-1] + (step if j % 2 == 1 else -step))
    if values[-1] != 0:
        raise AssertionError(f"Morse recursion ended at i_N={values[-1]} instead of 0")
    return MorseVector(tuple(values))


def is_morse(sigma: Permutation) -> bool:
    return not morse_indices(sigma).formal


@dataclass(frozen=True)
class ZeroMatrix:
    """Zero numbers ``z[j, k]`` between meander vertices, 1-based access.

    The diagonal carries the Morse indices.
    """

    z: np.ndarray  # (N, N), 0-based storage

    def __call__(self, j: int, k: int) -> int:
        return int(self.z[j - 1, k - 1])

    @property
    def n(self) -> int:
        return self.z.shape[0]

    def to_dict(self) -> dict:
        return {"n": self.n, "index_base": 1, "order": "meander", "z": self.z.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def zero_numbers(sigma: Permutation, formal: bool = False) -> ZeroMatrix:
    """Zero numbers from the meander recursion.

    Non-Morse input is rejected unless ``formal`` is set, in which case the
    same recursion yields formal (possibly negative) values.
    """
    morse = morse_indices(sigma)
    if morse.formal and not formal:
        raise MeanderError("zero numbers of a non-Morse meander require formal=True")
    inv = sigma.inverse()
    n = sigma.n
    z = np.zeros((n, n), dtype=np.int64)
    for k in range(1, n + 1):
        z[k - 1, k - 1] = morse[k]

        def step(j: int, value: int) -> int:
            # z_{j+1,k} from z_{jk}; the bracket is computed doubled
            bracket = _sign(inv(j + 1) - inv(k)) - _sign(inv(j) - inv(k))
            doubled = bracket if j % 2 == 1 else -bracket
            assert doubled % 2 == 0
            return value + doubled // 2

        if k > 1:
            value = 0
            for j in range(1, k - 1):
                z[j - 1, k - 1] = value
                value = step(j, value)
            z[k - 2, k - 1] = value
        if k < n:
            value = min(morse[k], morse[k + 1])
            for j in range(k + 1, n):
                z[j - 1, k - 1] = value
                value = step(j, value)
            z[n - 1, k - 1] = value
    if n > 1:
        assert not z[0, 1:].any() and not z[n - 1, : n - 1].any(), "boundary rows must vanish"
    return ZeroMatrix(z)


@dataclass(frozen=True)
class MorsePolynomial:
    """Morse counts ``mu_i``; the pointed version carries ``mu_{-1} = 1``."""

    counts: Mapping[int, int]
    pointed: bool = False

    @property
    def degree(self) -> int:
        return max(i for i, c in self.counts.items() if c)

    @property
    def lowest(self) -> int:
        return -1 if self.pointed else 0

    def __getitem__(self, i: int) -> int:
        return self.counts.get(i, 0)

    def coefficients(self) -> tuple[int, ...]:
        """Counts from the lowest level up to the degree."""
        return tuple(self[i] for i in range(self.lowest, self.degree + 1))

    def total(self) -> int:
        return sum(c for i, c in self.counts.items() if i >= 0)

    def is_reversible(self) -> bool:
        """``mu_i == mu_{d-1-i}`` on the pointed levels -1..d."""
        d = self.degree
        return all(self[i] == self[d - 1 - i] for i in range(-1, d + 1))

    def with_star(self) -> "MorsePolynomial":
        counts = dict(self.counts)
        counts[-1] = 1
        return MorsePolynomial(counts, pointed=True)

    def to_dict(self) -> dict:
        return {"lowest": self.lowest, "counts": list(self.coefficients())}


def tally(values, pointed: bool = False) -> MorsePolynomial:
    counts = dict(Counter(values))
    if pointed:
        counts[-1] = 1
    return MorsePolynomial(counts, pointed)


def morse_polynomial(sigma: Permutation, pointed: bool = False, formal: bool = False) -> MorsePolynomial:
    morse = morse_indices(sigma)
    if morse.formal and not formal:
        raise MeanderError(f"non-Morse meander (i_min={morse.i_min})")
    return tally(morse.values, pointed)
