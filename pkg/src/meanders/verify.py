"""Property suites that check structural results instance by instance.

Each suite returns a :class:`SuiteReport`; a suite passes when no instance
produced a failure message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .cfrac import suspended_sigma, table_classes
from .connections import (
    blocking_matrix,
    connection_graph,
    find_reversor,
    full_relation,
    graded_isomorphic,
    is_reversor,
    is_sturm_ball,
    verify_cascading,
)
from .core import Permutation, reverse_rho, rotate_kappa, suspend
from .invariants import morse_indices, morse_polynomial, zero_numbers
from .three_nose import (
    Label,
    build_meander_pq,
    chafee_infante_labels,
    chafee_infante_sigma,
    chafee_infante_stack,
    cis_lattice,
    equilibrium_labels,
    insert_q_nest,
    label_swap_lambda,
    morse_counts_rq,
    nest_sums,
    reversor_rq,
    sigma_rq_closed_form,
)


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def rq_pairs(rmax: int, qmax: int) -> Iterator[tuple[int, int]]:
    for r in range(1, rmax + 1):
        for q in range(1, qmax + 1):
            if r * q > 1:
                yield r, q


def sturm_family(rmax: int = 6, qmax: int = 6, dmax: int = 10) -> list[Permutation]:
    """Chafee-Infante and sigma_rq permutations with their rotations."""
    out = [chafee_infante_sigma(d) for d in range(1, dmax + 1)]
    for r, q in rq_pairs(rmax, qmax):
        sigma = sigma_rq_closed_form(r, q)
        out += [sigma, rotate_kappa(sigma)]
    return out


def table_family(n: int = 63) -> list[Permutation]:
    return [suspended_sigma(cf) for cf in table_classes(n)]


def suspension_family(count: int = 200) -> list[Permutation]:
    """At least ``count`` Sturm meanders: base builders plus iterated suspensions."""
    base = sturm_family(rmax=4, qmax=4, dmax=8)
    out = []
    times = 0
    while len(out) < count:
        out += [suspend(s, times) for s in base]
        times += 1
    return out


def equivalence(max_rq: int = 10, iso_max: int = 6) -> SuiteReport:
    rep = SuiteReport("equivalence")
    for r in range(1, max_rq + 1):
        for q in range(1, max_rq + 1):
            lhs = sigma_rq_closed_form(q, r)
            rhs = rotate_kappa(reverse_rho(sigma_rq_closed_form(r, q)))
            rep.check(lhs == rhs, f"sigma_{q}{r} != kappa rho sigma_{r}{q}")
    for r, q in rq_pairs(iso_max, iso_max):
        g_qr = equilibrium_labels(q, r).relabel(connection_graph(sigma_rq_closed_form(q, r), pointed=True))
        g_rq = equilibrium_labels(r, q).relabel(connection_graph(sigma_rq_closed_form(r, q), pointed=True))
        swapped = g_qr.relabel(label_swap_lambda(r, q))
        rep.check(swapped == g_rq, f"Lambda C_{q}{r} != C_{r}{q} as labeled graphs")
        rep.check(graded_isomorphic(g_qr, g_rq) is not None, f"C_{q}{r} and C_{r}{q} not graded isomorphic")
    return rep


def lattice(rmax: int = 6, qmax: int = 6) -> SuiteReport:
    rep = SuiteReport("lattice")
    for r, q in rq_pairs(rmax, qmax):
        sigma = sigma_rq_closed_form(r, q)
        rep.check(build_meander_pq(r * (q + 1), q).sigma == sigma, f"({r},{q}): geometric and closed form differ")
        graph = equilibrium_labels(r, q).relabel(connection_graph(sigma, pointed=True))
        rep.check(graph == cis_lattice(r, q), f"({r},{q}): connection graph differs from the lattice")
        counts = morse_polynomial(sigma).counts
        rep.check(counts == dict(morse_counts_rq(r, q).counts), f"({r},{q}): Morse counts differ")
        top = graph.without_star().level(graph.top_level)
        rep.check(is_sturm_ball(graph) and top == [Label("B", r, q)], f"({r},{q}): not a Sturm ball with top B^r_q")
    return rep


def reversibility(rmax: int = 6, qmax: int = 6, table_n: int | None = None) -> SuiteReport:
    rep = SuiteReport("reversibility")
    for r, q in rq_pairs(rmax, qmax):
        graph = equilibrium_labels(r, q).relabel(connection_graph(sigma_rq_closed_form(r, q), pointed=True))
        rep.check(is_reversor(graph, reversor_rq(r, q).mapping), f"({r},{q}): explicit reversor invalid")
        found = find_reversor(graph)
        rep.check(found is not None, f"({r},{q}): no reversor found")
    if table_n is not None:
        for cf in table_classes(table_n):
            graph = connection_graph(suspended_sigma(cf), pointed=True)
            if find_reversor(graph) is not None:
                rep.check(graph.morse_polynomial().is_reversible(), f"{cf}: reversible but Morse counts asymmetric")
    return rep


def chafee(dmax: int = 10) -> SuiteReport:
    rep = SuiteReport("chafee")
    for d in range(1, dmax + 1):
        sigma = chafee_infante_sigma(d)
        graph = chafee_infante_labels(d).relabel(connection_graph(sigma, pointed=True))
        stack = chafee_infante_stack(d)
        rep.check(graph == stack, f"d={d}: graph differs from the stack")
        swap = {Label(t, None, j): Label("B" if t == "A" else "A", None, d - j) for t in "AB" for j in range(d + 1)}
        rep.check(is_reversor(stack, swap), f"d={d}: A_j <-> B_(d-j) is not a reversor")
        rep.check(suspend(sigma) == chafee_infante_sigma(d + 1), f"d={d}: suspension is not sigma_(d+1)")
        coeffs = morse_polynomial(sigma).coefficients()
        rep.check(coeffs == (2,) * d + (1,), f"d={d}: Morse counts {coeffs}")
    return rep


def suspension_laws(sigma: Permutation) -> list[str]:
    """Index shift, zero-number shift, polar connections and interior edges under one suspension."""
    fails = []
    n = sigma.n
    big = suspend(sigma)
    new = lambda m: n + 2 - m
    i, ti = morse_indices(sigma), morse_indices(big)
    if ti[1] != 0 or ti[n + 2] != 0:
        fails.append("polar vertices not at level 0")
    if any(ti[new(m)] != i[m] + 1 for m in range(1, n + 1)):
        fails.append("interior Morse indices not shifted by one")
    z, tz = zero_numbers(sigma).z, zero_numbers(big).z
    rev = np.arange(n, 0, -1)  # old 0-based index m-1 -> new 0-based index n+1-m
    if not np.array_equal(tz[np.ix_(rev, rev)], z + 1):
        fails.append("interior zero numbers not shifted by one")
    if tz[0].any() or tz[:, 0].any() or tz[-1].any() or tz[:, -1].any():
        fails.append("zero numbers against the polar vertices are not zero")
    rel, trel = full_relation(sigma), full_relation(big)
    poles = (1, n + 2)
    if any((new(m), pole) not in trel for m in range(1, n + 1) for pole in poles):
        fails.append("some interior vertex misses a polar sink")
    interior = {(u, v) for u, v in trel if u not in poles and v not in poles}
    if interior != {(new(u), new(v)) for u, v in rel}:
        fails.append("interior relation not preserved")
    g, tg = connection_graph(sigma), connection_graph(big)
    inner = {(u, v) for u, v in tg.edges if u not in poles and v not in poles}
    if inner != {(new(u), new(v)) for u, v in g.edges}:
        fails.append("interior edges not preserved")
    if any((v, pole) not in tg.edges for v in tg.level(1) for pole in poles):
        fails.append("a level-1 vertex misses a polar sink edge")
    return fails


def suspension(count: int = 200) -> SuiteReport:
    rep = SuiteReport("suspension")
    for sigma in suspension_family(count):
        fails = suspension_laws(sigma)
        rep.check(not fails, f"{sigma}: {'; '.join(fails)}")
    return rep


def _family(name: str, rmax: int, qmax: int, dmax: int) -> list[Permutation]:
    if name == "table63":
        return table_family(63)
    if name == "standard":
        return sturm_family(rmax, qmax, dmax)
    raise ValueError(f"unknown instance set {name!r}")


def cascading(instances: Iterable[Permutation]) -> SuiteReport:
    rep = SuiteReport("cascading")
    for sigma in instances:
        rep.check(verify_cascading(sigma), f"{sigma}: closure differs from the full relation")
    return rep


def blocking(instances: Iterable[Permutation]) -> SuiteReport:
    rep = SuiteReport("blocking")
    for sigma in instances:
        z = zero_numbers(sigma)
        same = np.array_equal(blocking_matrix(sigma, z, "meander"), blocking_matrix(sigma, z, "axis"))
        rep.check(same, f"{sigma}: blocking depends on the boundary order")
    return rep


def nestsums(rmax: int = 6, qmax: int = 6) -> SuiteReport:
    rep = SuiteReport("nestsums")
    for r, q in rq_pairs(rmax, qmax):
        p = r * (q + 1)
        sigma = sigma_rq_closed_form(r, q)
        sums = nest_sums(sigma)
        rep.check(all(v == sigma.n + 2 for k, v in sums.items() if k % 2 == 0), f"({r},{q}): even sums")
        odd = [v for k, v in sums.items() if k % 2]
        ok = odd.count(2 * p + 1) == p and odd.count(4 * p + 2 * q + 1) == q and len(odd) == p + q
        rep.check(ok, f"({r},{q}): odd sums {sorted(set(odd))}")
    return rep


def insertion(pmax: int = 12, qmax: int = 5) -> SuiteReport:
    """Suspend a rotated M_{p',q} and insert a q-nest; compare with M_{p'+q+1,q}."""
    from math import gcd

    rep = SuiteReport("insertion")
    for p0 in range(2, pmax + 1):
        for q in range(1, qmax + 1):
            if gcd(p0 - 1, q + 1) != 1:
                continue
            before = rotate_kappa(build_meander_pq(p0, q).sigma)
            grown = insert_q_nest(suspend(before), q).sigma
            rep.check(grown == build_meander_pq(p0 + q + 1, q).sigma, f"p'={p0}, q={q}: insertion differs")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "equivalence": lambda a: equivalence(a.max or 10, min(a.max or 6, 6)),
    "lattice": lambda a: lattice(a.rmax, a.qmax),
    "reversibility": lambda a: reversibility(a.rmax, a.qmax, 63 if a.set == "table63" else None),
    "chafee": lambda a: chafee(a.max or 10),
    "suspension": lambda a: suspension(a.count),
    "cascading": lambda a: cascading(_family(a.set, a.rmax, a.qmax, a.max or 10)),
    "blocking": lambda a: blocking(_family(a.set, a.rmax, a.qmax, a.max or 10)),
    "nestsums": lambda a: nestsums(a.rmax, a.qmax),
    "insertion": lambda a: insertion(qmax=a.qmax),
}
