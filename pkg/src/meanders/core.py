"""Permutation-encoded meanders.

Equilibria are identified with their position along the meander curve
(``h0`` is the identity), so a permutation ``sigma`` maps an axis position
to the meander position of the equilibrium sitting there, and
``sigma.inverse()(j)`` is the axis position of meander vertex ``j``.
Everything is 1-based at the API boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class MeanderError(ValueError):
    """Raised when a permutation violates a meander precondition."""


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, n odd, stored by its one-line image."""

    image: tuple[int, ...]

    def __init__(self, image: Iterable[int]):
        image = tuple(int(x) for x in image)
        n = len(image)
        if n == 0 or n % 2 == 0:
            raise MeanderError(f"permutation size must be odd, got {n}")
        if sorted(image) != list(range(1, n + 1)):
            raise MeanderError(f"not a bijection of 1..{n}: {image}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    def __len__(self) -> int:
        return len(self.image)

    def __iter__(self) -> Iterator[int]:
        return iter(self.image)

    def __str__(self) -> str:
        return self.to_text()

    def inverse(self) -> "Permutation":
        return Permutation(self._inverse_image)

    @cached_property
    def _inverse_image(self) -> tuple[int, ...]:
        inv = [0] * self.n
        for a, m in enumerate(self.image, start=1):
            inv[m - 1] = a
        return tuple(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self o other``, i.e. ``j -> self(other(j))``."""
        if other.n != self.n:
            raise MeanderError("cannot compose permutations of different size")
        return Permutation(self(other(j)) for j in range(1, self.n + 1))

    # serialization

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.image)

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        text = text.strip().strip("()[]")
        parts = [p for p in text.replace(" ", ",").split(",") if p]
        try:
            return cls(int(p) for p in parts)
        except ValueError as exc:
            if isinstance(exc, MeanderError):
                raise
            raise MeanderError(f"cannot parse permutation from {text!r}") from exc

    def to_dict(self) -> dict:
        return {"n": self.n, "sigma": list(self.image)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Permutation":
        perm = cls(data["sigma"])
        if "n" in data and data["n"] != perm.n:
            raise MeanderError(f"declared n={data['n']} but sigma has {perm.n} entries")
        return perm

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Accept either the one-line text format or the JSON object format."""
        stripped = text.strip()
        if stripped.startswith("{"):
            try:
                return cls.from_dict(json.loads(stripped))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MeanderError(f"malformed permutation JSON: {exc}") from exc
        return cls.from_text(stripped)


def identity(n: int) -> Permutation:
    return Permutation(range(1, n + 1))


@dataclass(frozen=True)
class Arc:
    side: str  # "upper" or "lower"
    endpoints: frozenset[int]

    def __post_init__(self):
        if self.side not in ("upper", "lower"):
            raise ValueError(f"bad arc side {self.side!r}")
        if len(self.endpoints) != 2:
            raise ValueError("arc endpoints must be distinct")

    @property
    def left(self) -> int:
        return min(self.endpoints)

    @property
    def right(self) -> int:
        return max(self.endpoints)


def _arc(side: str, a: int, b: int) -> Arc:
    return Arc(side, frozenset((a, b)))


@dataclass(frozen=True)
class Meander:
    """A permutation together with its upper and lower arcs.

    Validation flags are computed on first access and cached.
    """

    sigma: Permutation

    @property
    def n(self) -> int:
        return self.sigma.n

    @cached_property
    def upper(self) -> frozenset[Arc]:
        inv = self.sigma.inverse()
        return frozenset(_arc("upper", inv(2 * t - 1), inv(2 * t)) for t in range(1, (self.n + 1) // 2))

    @cached_property
    def lower(self) -> frozenset[Arc]:
        inv = self.sigma.inverse()
        return frozenset(_arc("lower", inv(2 * t), inv(2 * t + 1)) for t in range(1, (self.n + 1) // 2))

    @cached_property
    def dissipative(self) -> bool:
        return validate_dissipative(self)

    @cached_property
    def jordan(self) -> bool:
        return validate_jordan(self)

    @cached_property
    def morse(self) -> bool:
        from .invariants import is_morse

        return self.dissipative and self.jordan and is_morse(self.sigma)

    @property
    def sturm(self) -> bool:
        return self.morse


def from_sigma(sigma: Permutation | Sequence[int]) -> Meander:
    if not isinstance(sigma, Permutation):
        sigma = Permutation(sigma)
    return Meander(sigma)


def _as_meander(m: Meander | Permutation | Sequence[int]) -> Meander:
    return m if isinstance(m, Meander) else from_sigma(m)


def validate_dissipative(m: Meander | Permutation) -> bool:
    sigma = _as_meander(m).sigma
    return sigma(1) == 1 and sigma(sigma.n) == sigma.n


def _crossing(a: Arc, b: Arc) -> bool:
    (p, q), (r, s) = (a.left, a.right), (b.left, b.right)
    return p < r < q < s or r < p < s < q


def validate_jordan(m: Meander | Permutation) -> bool:
    """True iff no two arcs on the same side cross."""
    m = _as_meander(m)
    for arcs in (m.upper, m.lower):
        ordered = sorted(arcs, key=lambda a: a.left)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                if b.left > a.right:
                    break
                if _crossing(a, b):
                    return False
    return True


def is_meander(m: Meander | Permutation) -> bool:
    """Dissipative and Jordan."""
    m = _as_meander(m)
    return m.dissipative and m.jordan


def require_meander(m: Meander | Permutation) -> Meander:
    m = _as_meander(m)
    if not m.dissipative:
        raise MeanderError(f"not dissipative: sigma(1)={m.sigma(1)}, sigma(N)={m.sigma(m.n)}")
    if not m.jordan:
        raise MeanderError("arcs self-intersect: not a Jordan meander")
    return m


def count_noses(m: Meander | Permutation) -> int:
    sigma = _as_meander(m).sigma
    return sum(1 for j in range(1, sigma.n) if abs(sigma(j + 1) - sigma(j)) == 1)


def rotate_kappa(sigma: Permutation) -> Permutation:
    """Rotation by 180 degrees: conjugation with the flip j -> N+1-j."""
    n = sigma.n
    return Permutation(n + 1 - sigma(n + 1 - j) for j in range(1, n + 1))


def reverse_rho(sigma: Permutation) -> Permutation:
    """Spatial reversal, which inverts the permutation."""
    return sigma.inverse()


def suspend(sigma: Permutation, times: int = 1) -> Permutation:
    """Add two overarching arcs; ``times`` iterates the operation."""
    for _ in range(times):
        if not validate_dissipative(sigma):
            raise MeanderError("suspension requires a dissipative permutation")
        n = sigma.n
        sigma = Permutation([1] + [n + 2 - sigma(j) for j in range(1, n + 1)] + [n + 2])
    return sigma


def walk_arcs(n: int, upper: dict[int, int], lower: dict[int, int]) -> Permutation:
    """Recover a meander permutation by walking its curve from axis position 1.

    ``upper`` and ``lower`` map each axis position to its partner on that side.
    The walk starts upwards at 1 and must end at ``n`` after visiting every
    position exactly once; otherwise the arcs close into extra loops.
    """
    path = [1]
    pos, side = 1, upper
    seen = {1}
    while pos in side:
        pos = side[pos]
        if pos in seen:
            break
        path.append(pos)
        seen.add(pos)
        side = lower if side is upper else upper
    if len(path) != n or path[-1] != n:
        raise MeanderError(
            f"arc configuration is not a single curve through 1..{n}: walk closed after {len(path)} vertices"
        )
    # path[j-1] is the axis position of meander vertex j, i.e. sigma^{-1}
    return Permutation(path).inverse()
