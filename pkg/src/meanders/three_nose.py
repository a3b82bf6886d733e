"""The 3-nose family M_pq, its Sturm permutations and Chafee-Infante lattices.

``M_pq`` has an upper-left p-nest, an upper-right q-nest and a lower
rainbow of p+q arcs.  It is a Sturm meander exactly when p = r(q+1); the
corresponding permutation is ``sigma_rq``.  Vertices of ``sigma_rq`` carry
labels ``A^j_k``/``B^j_k`` (0 <= j <= r, 0 <= k <= q) with ``A^0_0`` the
distinguished vertex at level -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Callable

from .connections import ConnectionGraph, Reversor
from .core import Meander, MeanderError, Permutation, from_sigma, rotate_kappa, walk_arcs
from .invariants import MorsePolynomial


@dataclass(frozen=True)
class Label:
    """Equilibrium label ``tag^sup_sub``; ``sup`` is None for Chafee-Infante labels."""

    tag: str
    sup: int | None
    sub: int

    def __post_init__(self):
        if self.tag not in ("A", "B"):
            raise ValueError(f"bad tag {self.tag!r}")

    @property
    def level(self) -> int:
        base = self.sub + (self.sup or 0)
        return base - 1 if self.tag == "A" else base

    def key(self) -> tuple:
        return (self.tag, -1 if self.sup is None else self.sup, self.sub)

    def swapped(self) -> "Label":
        return Label(self.tag, self.sub, self.sup)

    def __str__(self) -> str:
        if self.sup is None:
            return f"{self.tag}_{self.sub}"
        return f"{self.tag}^{self.sup}_{self.sub}"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Label":
        m = re.fullmatch(r"([AB])(?:\^(\d+))?_(\d+)", text.strip())
        if not m:
            raise ValueError(f"cannot parse label {text!r}")
        return cls(m.group(1), None if m.group(2) is None else int(m.group(2)), int(m.group(3)))


STAR = Label("A", 0, 0)
CI_STAR = Label("A", None, 0)


def build_meander_pq(p: int, q: int) -> Meander:
    """Lay out the nests and rainbow on the axis and walk the curve."""
    if p < 2 or q < 1:
        raise MeanderError(f"3-nose shape needs p >= 2 and q >= 1, got p={p}, q={q}")
    n = 2 * (p + q) + 1
    upper, lower = {}, {}
    for t in range(1, p + 1):
        a, b = t, 2 * p + 1 - t
        upper[a], upper[b] = b, a
    for t in range(1, q + 1):
        a, b = 2 * p + t, 2 * p + 2 * q + 1 - t
        upper[a], upper[b] = b, a
    for t in range(1, p + q + 1):
        a, b = t + 1, n + 1 - t
        lower[a], lower[b] = b, a
    try:
        sigma = walk_arcs(n, upper, lower)
    except MeanderError as exc:
        raise MeanderError(f"M_{{{p},{q}}}: gcd(p-1, q+1) = {gcd(p - 1, q + 1)}; {exc}") from exc
    return from_sigma(sigma)


def sigma_rq_closed_form(r: int, q: int) -> Permutation:
    if r < 1 or q < 1:
        raise MeanderError("sigma_rq needs r, q >= 1")
    n = 2 * (r + 1) * (q + 1) - 1
    image = [0] * n
    for j in range(r + 1):
        for k in range(q + 1):
            image[2 * ((q + 1) * j + k)] = 2 * (j + (r + 1) * k) + 1
            if j or k:
                image[2 * ((q + 1) * (r - j) + (q - k) + 1) - 1] = 2 * (j + (r + 1) * k)
    return Permutation(image)


@dataclass(frozen=True)
class Labeling:
    """Labels along the axis (1..N+1) and along the meander (0..N)."""

    n: int
    by_axis: dict
    by_meander: dict

    def meander_label(self, m: int) -> Label:
        return self.by_meander[m]

    def meander_position(self, label: Label) -> int:
        return self._meander_index[label]

    def axis_position(self, label: Label) -> int:
        return self._axis_index[label]

    @property
    def _meander_index(self) -> dict:
        return {lab: m for m, lab in self.by_meander.items()}

    @property
    def _axis_index(self) -> dict:
        return {lab: a for a, lab in self.by_axis.items()}

    def kappa(self) -> "Labeling":
        """Labels of the rotated permutation; rotation keeps labels on equilibria."""
        n = self.n
        star_a, star_m = self.by_axis[n + 1], self.by_meander[0]
        by_axis = {n + 1 - a: lab for a, lab in self.by_axis.items() if a <= n}
        by_axis[n + 1] = star_a
        by_meander = {n + 1 - m: lab for m, lab in self.by_meander.items() if m >= 1}
        by_meander[0] = star_m
        return Labeling(n, by_axis, by_meander)

    def relabel(self, graph: ConnectionGraph) -> ConnectionGraph:
        """Rename meander positions (and the star 0) of a graph by labels."""
        return graph.relabel(self.by_meander)


def _axis_labels(r: int, q: int) -> dict:
    out = {}
    for j in range(r + 1):
        for k in range(q + 1):
            if j % 2:
                out[(q + 1) * (j - 1) + k + 1] = Label("A", j, k)
                out[(q + 1) * j + (q - k) + 1] = Label("B", j, k)
            else:
                out[(q + 1) * (2 * r + 1 - j) + (q - k) + 1] = Label("A", j, k)
                out[(q + 1) * (2 * r - j) + k + 1] = Label("B", j, k)
    return out


def _meander_labels(r: int, q: int) -> dict:
    out = {}
    for j in range(r + 1):
        for k in range(q + 1):
            if k % 2:
                out[(r + 1) * (2 * q + 1 - k) + (2 * r + 1 - j)] = Label("A", j, k)
                out[(r + 1) * (2 * q + 1 - k) + j] = Label("B", j, k)
            else:
                out[(r + 1) * k + j] = Label("A", j, k)
                out[(r + 1) * (k + 1) + (r - j)] = Label("B", j, k)
    return out


def _ascending(tag: str, fixed: str, value: int, length: int, reverse: bool = False) -> list[Label]:
    idx = range(length + 1)
    if reverse:
        idx = reversed(idx)
    if fixed == "sup":
        return [Label(tag, value, i) for i in idx]
    return [Label(tag, i, value) for i in idx]


def axis_label_sequence(r: int, q: int) -> list[Label]:
    """The h1 path as concatenated sequences CI^j; odd j ascending, then even j descending."""
    def ci(j):
        first, second = ("A", "B") if j % 2 else ("B", "A")
        return _ascending(first, "sup", j, q) + _ascending(second, "sup", j, q, reverse=True)

    odd = list(range(1, r + 1, 2))
    even = list(range(r if r % 2 == 0 else r - 1, -1, -2))
    seq = [lab for j in odd + even for lab in ci(j)]
    return seq


def meander_label_sequence(r: int, q: int) -> list[Label]:
    """The h0 path as concatenated sequences CI_k; even k ascending, then odd k descending."""
    def ci(k):
        first, second = ("A", "B") if k % 2 == 0 else ("B", "A")
        return _ascending(first, "sub", k, r) + _ascending(second, "sub", k, r, reverse=True)

    even = list(range(0, q + 1, 2))
    odd = list(range(q if q % 2 else q - 1, 0, -2))
    return [lab for k in even + odd for lab in ci(k)]


def equilibrium_labels(r: int, q: int) -> Labeling:
    """Axis and meander labelings of ``sigma_rq``, computed independently and cross-checked."""
    if r < 1 or q < 1:
        raise MeanderError("labels need r, q >= 1")
    n = 2 * (r + 1) * (q + 1) - 1
    by_axis = _axis_labels(r, q)
    by_meander = _meander_labels(r, q)
    if sorted(by_axis) != list(range(1, n + 2)) or sorted(by_meander) != list(range(0, n + 1)):
        raise AssertionError("label formulas do not enumerate the vertices")
    if by_axis[n + 1] != STAR or by_meander[0] != STAR:
        raise AssertionError("the distinguished vertex must close the axis path and open the meander path")
    sigma = sigma_rq_closed_form(r, q)
    meander_of = {lab: m for m, lab in by_meander.items()}
    for a in range(1, n + 1):
        if meander_of[by_axis[a]] != sigma(a):
            raise AssertionError(f"labelings disagree at axis position {a}")
    if [by_axis[a] for a in range(1, n + 2)] != axis_label_sequence(r, q):
        raise AssertionError("axis labels disagree with the CI^j concatenation")
    if [by_meander[m] for m in range(0, n + 1)] != meander_label_sequence(r, q):
        raise AssertionError("meander labels disagree with the CI_k concatenation")
    return Labeling(n, by_axis, by_meander)


# Chafee-Infante


def chafee_infante_sigma(d: int) -> Permutation:
    if d < 1:
        raise MeanderError("Chafee-Infante needs d >= 1")
    n = 2 * d + 1
    return Permutation(j if j % 2 else n + 1 - j for j in range(1, n + 1))


def chafee_infante_labels(d: int) -> Labeling:
    n = 2 * d + 1
    sigma = chafee_infante_sigma(d)
    by_axis = {a: Label("A", None, a) if a <= d else Label("B", None, n - a) for a in range(1, n + 1)}
    by_axis[n + 1] = CI_STAR
    by_meander = {sigma(a): lab for a, lab in by_axis.items() if a <= n}
    by_meander[0] = CI_STAR
    return Labeling(n, by_axis, by_meander)


def _stack_edges(d: int, lift: Callable[[str, int], object]) -> set:
    """Edges A_{j+1}, B_j -> A_j, B_{j-1} of the pointed stack of height d+1."""
    edges = set()
    for j in range(d + 1):
        if j + 1 <= d:
            edges.add((lift("A", j + 1), lift("A", j)))
            if j >= 1:
                edges.add((lift("A", j + 1), lift("B", j - 1)))
        edges.add((lift("B", j), lift("A", j)))
        if j >= 1:
            edges.add((lift("B", j), lift("B", j - 1)))
    return edges


def chafee_infante_stack(d: int, pointed: bool = True) -> ConnectionGraph:
    if d < 1:
        raise MeanderError("Chafee-Infante needs d >= 1")
    lift = lambda tag, j: Label(tag, None, j)
    levels = {Label(t, None, j): Label(t, None, j).level for t in "AB" for j in range(d + 1)}
    graph = ConnectionGraph(levels, _stack_edges(d, lift), CI_STAR)
    return graph if pointed else graph.without_star()


def cis_lattice(r: int, q: int) -> ConnectionGraph:
    """Union of r+1 vertical stacks (height q+1) and q+1 slanted stacks (height r+1)."""
    if r < 1 or q < 1 or r * q <= 1:
        raise MeanderError("the Chafee-Infante lattice needs r, q >= 1 and rq > 1")
    levels = {Label(t, j, k): Label(t, j, k).level for t in "AB" for j in range(r + 1) for k in range(q + 1)}
    edges = set()
    for j in range(r + 1):
        edges |= _stack_edges(q, lambda tag, k, j=j: Label(tag, j, k))
    for k in range(q + 1):
        edges |= _stack_edges(r, lambda tag, j, k=k: Label(tag, j, k))
    return ConnectionGraph(levels, edges, STAR)


def morse_counts_rq(r: int, q: int) -> MorsePolynomial:
    if r < 1 or q < 1 or r * q <= 1:
        raise MeanderError("Morse counts formula needs r, q >= 1 and rq > 1")
    lo, hi = min(r, q), max(r, q)
    counts = {}
    for i in range(r + q + 1):
        if i < lo:
            counts[i] = 3 + 2 * i
        elif i < hi:
            counts[i] = 2 + 2 * lo
        else:
            counts[i] = 2 * (r + q) + 1 - 2 * i
    return MorsePolynomial(counts)


def reversor_rq(r: int, q: int) -> Reversor:
    """The 180-degree rotation A^j_k <-> B^{r-j}_{q-k} of the lattice."""
    if r * q <= 1:
        raise MeanderError("reversor needs rq > 1")
    mapping = {}
    for j in range(r + 1):
        for k in range(q + 1):
            mapping[Label("A", j, k)] = Label("B", r - j, q - k)
            mapping[Label("B", r - j, q - k)] = Label("A", j, k)
    return Reversor(mapping)


def label_swap_lambda(r: int, q: int) -> dict:
    """Label map from the vertices of sigma_qr onto those of sigma_rq."""
    return {Label(t, k, j): Label(t, j, k) for t in "AB" for j in range(r + 1) for k in range(q + 1)}


def rq_from_n(n: int) -> list[tuple[int, int]]:
    """All (r, q) with r, q >= 1 and 2(r+1)(q+1) - 1 == n."""
    if n % 2 == 0:
        return []
    half = (n + 1) // 2
    return [(a - 1, half // a - 1) for a in range(2, half) if half % a == 0 and half // a >= 2]


def detect_labels(sigma: Permutation) -> Labeling | None:
    """Labels for sigma_d, sigma_rq or the rotation of sigma_rq, if sigma is one of these."""
    n = sigma.n
    d = (n - 1) // 2
    if d >= 1 and sigma == chafee_infante_sigma(d):
        return chafee_infante_labels(d)
    for r, q in rq_from_n(n):
        base = sigma_rq_closed_form(r, q)
        if sigma == base:
            return equilibrium_labels(r, q)
        if sigma == rotate_kappa(base):
            return equilibrium_labels(r, q).kappa()
    return None


# suspension followed by q-nest insertion


def _check_suspended_shape(sigma: Permutation, q: int) -> None:
    m = sigma.n
    meander = from_sigma(sigma)
    upper = {a: b for arc in meander.upper for a, b in [(arc.left, arc.right), (arc.right, arc.left)]}
    lower = {a: b for arc in meander.lower for a, b in [(arc.left, arc.right), (arc.right, arc.left)]}
    nest_hi = 2 * q + 2
    ok = m - 1 - nest_hi >= 2
    ok = ok and all(upper.get(a) == m - a for a in range(1, m))
    ok = ok and lower.get(2) == m
    ok = ok and all(lower.get(a) == 2 * q + 5 - a for a in range(3, nest_hi + 1))
    ok = ok and all(lower.get(a) == nest_hi + m - a for a in range(nest_hi + 1, m))
    if not ok:
        raise MeanderError(
            "expected a suspended rotated 3-nose meander: upper rainbow, lower-left q-nest, lower-right nest"
        )


def insert_q_nest(suspended: Meander | Permutation, q: int) -> Meander:
    """Reroute each lower-left q-nest arc through a new upper-right q-nest.

    Every lower shortcut ``a -> b`` of the q-nest becomes the detour
    ``a -> x -> y -> b`` where ``x, y`` are new axis positions inserted
    between the last upper-rainbow position and the final vertex.
    """
    sigma = suspended.sigma if isinstance(suspended, Meander) else suspended
    _check_suspended_shape(sigma, q)
    m = sigma.n
    n_new = m + 2 * q
    nest = range(3, 2 * q + 3)
    path = list(sigma.inverse().image)  # axis positions in meander order
    out = []
    for t, a in enumerate(path, start=1):
        out.append(n_new if a == m else a)
        if t % 2 == 0 and t < m:
            b = path[t]
            if a in nest and b in nest:
                out.extend([n_new + 2 - a, n_new + 2 - b])
    return from_sigma(Permutation(out).inverse())


def nest_sums(sigma: Permutation) -> dict[int, int]:
    """``sigma^{-1}(n) + sigma^{-1}(n+1)`` for every meander position n < N."""
    inv = sigma.inverse()
    return {n: inv(n) + inv(n + 1) for n in range(1, sigma.n)}
