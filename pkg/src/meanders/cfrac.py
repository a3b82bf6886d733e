"""Continued fractions classifying 3-nose meanders, and the n-arc table.

A 3-nose meander ``M_pq`` is encoded by ``n0/(q+1) = [b0, b1, ..., bm]``
with ``n0 = p + q`` and m even.  All arithmetic here is exact.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from math import gcd
from typing import Iterable, Sequence

from .connections import connection_graph, find_reversor, graded_isomorphic
from .core import suspend
from .invariants import MorsePolynomial, morse_indices


class FractionError(ValueError):
    pass


@dataclass(frozen=True)
class ContinuedFraction:
    terms: tuple[int, ...]

    def __init__(self, terms: Iterable[int]):
        terms = tuple(int(b) for b in terms)
        if not terms or len(terms) % 2 == 0:
            raise FractionError(f"need an even number m of partial quotients after b0, got {list(terms)}")
        if terms[0] < 0 or any(b < 1 for b in terms[1:]):
            raise FractionError(f"need b0 >= 0 and b_k >= 1, got {list(terms)}")
        object.__setattr__(self, "terms", terms)

    @property
    def m(self) -> int:
        return len(self.terms) - 1

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, k: int) -> int:
        return self.terms[k]

    def __lt__(self, other: "ContinuedFraction") -> bool:
        return self.terms < other.terms

    def __str__(self) -> str:
        return "[" + ",".join(str(b) for b in self.terms) + "]"

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        parts = [p for p in text.strip().strip("[]()").replace(" ", ",").split(",") if p]
        try:
            return cls(normalize(int(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, FractionError):
                raise
            raise FractionError(f"cannot parse continued fraction {text!r}") from exc


def normalize(terms: Iterable[int]) -> tuple[int, ...]:
    """Bring an expansion to even m, splitting or merging a trailing 1."""
    terms = list(terms)
    if len(terms) % 2 == 0:
        if terms[-1] >= 2:
            terms[-1:] = [terms[-1] - 1, 1]
        elif len(terms) >= 2:
            last = terms.pop()
            terms[-1] += last
        else:
            raise FractionError("empty expansion")
    return tuple(terms)


def cf_expand(n0: int, d0: int) -> ContinuedFraction:
    if d0 < 1 or n0 < 1:
        raise FractionError(f"need positive numerator and denominator, got {n0}/{d0}")
    if gcd(n0, d0) != 1:
        raise FractionError(f"{n0} and {d0} are not coprime")
    terms = []
    a, b = n0, d0
    while b:
        terms.append(a // b)
        a, b = b, a % b
    return ContinuedFraction(normalize(terms))


def cf_evaluate(cf: ContinuedFraction | Sequence[int]) -> tuple[int, int]:
    terms = cf.terms if isinstance(cf, ContinuedFraction) else tuple(cf)
    h_prev, h = 1, terms[0]
    k_prev, k = 0, 1
    for b in terms[1:]:
        h_prev, h = h, b * h + h_prev
        k_prev, k = k, b * k + k_prev
    return h, k


def cf_reverse(cf: ContinuedFraction) -> ContinuedFraction:
    if cf[0] == 0:
        raise FractionError("an expansion with b0 = 0 has no reversed expansion")
    return ContinuedFraction(cf.terms[::-1])


def mod_inverse(a: int, n0: int) -> int:
    if gcd(a, n0) != 1:
        raise FractionError(f"{a} is not invertible modulo {n0}")
    return pow(a, -1, n0) if n0 > 1 else 0


@dataclass(frozen=True)
class Derived:
    p: int
    q: int
    n0: int
    s: int
    d: int
    n: int

    def to_dict(self) -> dict:
        return dict(p=self.p, q=self.q, n0=self.n0, s=self.s, d=self.d, n=self.n)


def derived_quantities(cf: ContinuedFraction) -> Derived:
    if cf.m == 0:
        raise FractionError(f"{cf} has m = 0 and does not describe a 3-nose meander")
    n0, q1 = cf_evaluate(cf)
    q = q1 - 1
    s = sum(cf.terms[1::2]) - 1
    d = sum(cf.terms) - 1
    n = n0 + s
    if cf.m == 2:
        b0, b1, b2 = cf.terms
        assert n == d + b0 * b1 * b2, f"arc count identity fails for {cf}"
    return Derived(p=n0 - q, q=q, n0=n0, s=s, d=d, n=n)


# integer polynomials, coefficient lists from the constant term up


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _x_pow_minus_one(k: int) -> list[int]:
    return [-1] + [0] * (k - 1) + [1] if k else [0]


def _div_x_minus_one(a: list[int]) -> list[int]:
    """Exact synthetic division by (x - 1)."""
    quotient = [0] * (len(a) - 1)
    carry = 0
    for i in range(len(a) - 1, 0, -1):
        carry += a[i]
        quotient[i - 1] = carry
    if carry + a[0] != 0:
        raise ArithmeticError("division by (x-1) is not exact")
    return _trim(quotient) if quotient else [0]


def short_morse_polynomial(b0: int, b1: int, b2: int) -> MorsePolynomial:
    """Pointed Morse counts of the suspended meander of ``[b0, b1, b2]``."""
    if b0 < 0 or b1 < 1 or b2 < 1:
        raise FractionError("need b0 >= 0 and b1, b2 >= 1")
    x = [0, 1]
    rhs = _add(
        _mul(_mul([1, -1], [1, -1]), _x_pow_minus_one(b0 + b1 + b2)),
        _mul(_mul(x, _x_pow_minus_one(b0)), _mul(_x_pow_minus_one(b1), _x_pow_minus_one(b2))),
    )
    poly = _mul(rhs, [1, 1])  # times (x + 1)
    for _ in range(3):
        poly = _div_x_minus_one(poly)
    # poly = x * M(x), so coefficient j belongs to level j - 1
    counts = {j - 1: c for j, c in enumerate(poly) if c}
    if any(c < 0 for c in counts.values()):
        raise ArithmeticError(f"negative Morse count for {(b0, b1, b2)}")
    d = b0 + b1 + b2 - 1
    result = MorsePolynomial(counts, pointed=True)
    assert result[-1] == 1 and result[d] == 1 and result.degree == d
    if b0 >= 1:
        assert result[0] == 3 and result[d - 1] == 3, f"boundary counts fail for {(b0, b1, b2)}"
    return result


def is_isotropic(cf: ContinuedFraction) -> bool:
    iso = cf[0] != 0 and cf.terms == cf.terms[::-1]
    n0, q1 = cf_evaluate(cf)
    q = q1 - 1
    if cf[0] != 0 and q1 < n0:
        assert iso == ((q * (q + 2)) % n0 == 0), f"isotropy criteria disagree for {cf}"
    return iso


# table


COLUMNS = ("b", "p-1", "q+1", "d", "rev", "iso", "s", "n0", "(q+1)*", "(p-1)*", "b*")


@dataclass(frozen=True)
class TableRow:
    b: ContinuedFraction
    p_minus_1: int
    q_plus_1: int
    d: int
    rev: bool
    iso: bool
    s: int
    n0: int
    q_plus_1_star: int
    p_minus_1_star: int
    b_star: ContinuedFraction
    lattice: str | None = None

    def cells(self, with_lattice: bool = False) -> tuple[str, ...]:
        yes = lambda flag: "yes" if flag else "no"
        out = (
            str(self.b), str(self.p_minus_1), str(self.q_plus_1), str(self.d), yes(self.rev), yes(self.iso),
            str(self.s), str(self.n0), str(self.q_plus_1_star), str(self.p_minus_1_star), str(self.b_star),
        )
        if with_lattice:
            out += (self.lattice or "-",)
        return out

    def sort_key(self) -> tuple:
        return (self.b.m, sorted(self.b.terms), self.b.terms)


def suspended_sigma(cf: ContinuedFraction):
    """Build ``M_pq`` for the class of ``cf`` and suspend it into a Sturm meander."""
    from .three_nose import build_meander_pq

    info = derived_quantities(cf)
    sigma = build_meander_pq(info.p, info.q).sigma
    if -morse_indices(sigma).i_min != info.s:
        raise AssertionError(f"minimal Morse index of {cf} disagrees with s = {info.s}")
    return suspend(sigma, info.s)


def matching_lattice(graph) -> str | None:
    """Name of a Chafee-Infante lattice graded-isomorphic to a pointed graph, if any."""
    from .three_nose import cis_lattice

    total = len(graph.vertices)
    if total % 2:
        return None
    half = total // 2
    for a in range(2, half):
        if half % a == 0 and half // a >= 2:
            r1, r2 = a - 1, half // a - 1
            if r1 <= r2 and r1 * r2 > 1 and graded_isomorphic(graph, cis_lattice(r1, r2)) is not None:
                return f"C_{{{r1},{r2}}}"
    return None


def table_row(cf: ContinuedFraction, with_lattice: bool = False) -> TableRow:
    info = derived_quantities(cf)
    graph = connection_graph(suspended_sigma(cf), pointed=True)
    rev = find_reversor(graph) is not None
    lattice = matching_lattice(graph) if with_lattice else None
    n0, q1 = info.n0, info.q + 1
    return TableRow(
        b=cf,
        p_minus_1=info.p - 1,
        q_plus_1=q1,
        d=info.d,
        rev=rev,
        iso=is_isotropic(cf),
        s=info.s,
        n0=n0,
        q_plus_1_star=mod_inverse(q1, n0),
        p_minus_1_star=mod_inverse(info.p - 1, n0),
        b_star=cf_reverse(cf),
        lattice=lattice,
    )


def table_classes(n: int) -> list[ContinuedFraction]:
    """Class representatives ``min(b, b*)`` of all 3-nose meanders with n arcs above the axis."""
    if n < 3:
        raise FractionError("table needs n >= 3")
    reps = set()
    for n0 in range(3, n + 1):
        for q1 in range(2, n0):
            if gcd(n0, q1) != 1:
                continue
            cf = cf_expand(n0, q1)
            if n0 + sum(cf.terms[1::2]) - 1 == n:
                reps.add(min(cf, cf_reverse(cf)))
    return sorted(reps, key=lambda cf: (cf.m, sorted(cf.terms), cf.terms))


def _row_task(args):
    terms, with_lattice = args
    return table_row(ContinuedFraction(terms), with_lattice)


def enumerate_table(n: int, jobs: int = 1, with_lattice: bool = False) -> list[TableRow]:
    tasks = [(cf.terms, with_lattice) for cf in table_classes(n)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    return sorted(rows, key=TableRow.sort_key)


def table_csv(rows: Sequence[TableRow], with_lattice: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS + (("lattice",) if with_lattice else ()))
    for row in rows:
        writer.writerow(row.cells(with_lattice))
    return buf.getvalue()


def load_golden(name: str = "table63.csv") -> list[tuple[str, ...]]:
    text = resources.files("meanders").joinpath("data", name).read_text()
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != COLUMNS:
        raise FractionError(f"fixture header {header} does not match {COLUMNS}")
    return [tuple(r) for r in reader if r]


def compare_golden(rows: Sequence[TableRow], golden: Sequence[tuple[str, ...]]) -> list[str]:
    """Row-level differences between computed rows and a fixture; empty when equal as sets."""
    computed = {row.cells() for row in rows}
    expected = set(golden)
    diff = [f"missing: {','.join(r)}" for r in sorted(expected - computed)]
    diff += [f"unexpected: {','.join(r)}" for r in sorted(computed - expected)]
    return diff
