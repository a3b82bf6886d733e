"""Heteroclinic connection graphs of Sturm meanders.

Vertices are meander positions ``1..N``; the distinguished vertex of a
pointed graph built from a permutation is ``STAR = 0`` at level -1.
Two equilibria are connected iff they are z-adjacent (no blocking
equilibrium between them) and the Morse index drops.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .core import MeanderError, Permutation
from .invariants import MorsePolynomial, ZeroMatrix, morse_indices, tally, zero_numbers

STAR = 0

Vertex = Hashable


def _vertex_key(v):
    key = getattr(v, "key", None)
    if callable(key):
        return (1,) + key()
    return (0, v)


@dataclass(frozen=True, eq=False)
class ConnectionGraph:
    """Graded digraph; every edge drops the level by exactly one."""

    levels: Mapping[Vertex, int]
    edges: frozenset
    star: Vertex | None = None

    def __post_init__(self):
        object.__setattr__(self, "levels", dict(self.levels))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for u, v in self.edges:
            if self.levels[u] != self.levels[v] + 1:
                raise ValueError(f"edge {u}->{v} does not drop the level by one")
        if self.star is not None:
            if self.levels.get(self.star) != -1:
                raise ValueError("the distinguished vertex must sit at level -1")

    def __eq__(self, other):
        if not isinstance(other, ConnectionGraph):
            return NotImplemented
        return self.levels == other.levels and self.edges == other.edges and self.star == other.star

    __hash__ = None

    @property
    def pointed(self) -> bool:
        return self.star is not None

    @property
    def vertices(self) -> list:
        return sorted(self.levels, key=lambda v: (self.levels[v], _vertex_key(v)))

    @property
    def top_level(self) -> int:
        return max(self.levels.values())

    def level(self, i: int) -> list:
        return [v for v in self.vertices if self.levels[v] == i]

    @cached_property
    def successors(self) -> dict:
        out = {v: set() for v in self.levels}
        for u, v in self.edges:
            out[u].add(v)
        return out

    @cached_property
    def predecessors(self) -> dict:
        inn = {v: set() for v in self.levels}
        for u, v in self.edges:
            inn[v].add(u)
        return inn

    def out_degree(self, v) -> int:
        return len(self.successors[v])

    def in_degree(self, v) -> int:
        return len(self.predecessors[v])

    @property
    def star_edges(self) -> frozenset:
        return frozenset(e for e in self.edges if e[1] == self.star) if self.pointed else frozenset()

    @property
    def heteroclinic_edges(self) -> frozenset:
        return self.edges - self.star_edges

    def morse_polynomial(self) -> MorsePolynomial:
        return tally((lvl for v, lvl in self.levels.items() if v != self.star), pointed=self.pointed)

    def without_star(self) -> "ConnectionGraph":
        if not self.pointed:
            return self
        levels = {v: i for v, i in self.levels.items() if v != self.star}
        return ConnectionGraph(levels, self.heteroclinic_edges)

    def with_star(self, star: Vertex = STAR) -> "ConnectionGraph":
        if self.pointed:
            return self
        levels = dict(self.levels)
        levels[star] = -1
        edges = set(self.edges) | {(v, star) for v, i in self.levels.items() if i == 0}
        return ConnectionGraph(levels, edges, star)

    def relabel(self, mapping: Mapping | Callable) -> "ConnectionGraph":
        f = mapping if callable(mapping) else mapping.__getitem__
        levels = {f(v): i for v, i in self.levels.items()}
        if len(levels) != len(self.levels):
            raise ValueError("relabeling is not injective")
        edges = {(f(u), f(v)) for u, v in self.edges}
        return ConnectionGraph(levels, edges, f(self.star) if self.pointed else None)

    # export

    def vertex_name(self, v) -> str:
        if v == self.star and not hasattr(v, "key"):
            return "*"
        return str(v)

    def to_dict(self) -> dict:
        def ident(v):
            return v if isinstance(v, int) else str(v)

        vertices = []
        for v in self.vertices:
            entry = {"id": ident(v), "level": self.levels[v]}
            if not isinstance(v, int) or v == self.star:
                entry["label"] = self.vertex_name(v)
            vertices.append(entry)
        key = lambda e: (_vertex_key(e[0]), _vertex_key(e[1]))
        return {
            "vertices": vertices,
            "edges": [[ident(u), ident(v)] for u, v in sorted(self.heteroclinic_edges, key=key)],
            "star_edges": [[ident(u), ident(v)] for u, v in sorted(self.star_edges, key=key)],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_dot(self, name: str = "C") -> str:
        q = lambda v: '"' + self.vertex_name(v) + '"'
        lines = [f"digraph {name} {{", "  rankdir=TB;"]
        for i in range(self.top_level, min(self.levels.values()) - 1, -1):
            members = " ".join(q(v) + ";" for v in self.level(i))
            lines.append(f"  {{ rank=same; {members} }}  // level {i}")
        key = lambda e: (-self.levels[e[0]], _vertex_key(e[0]), _vertex_key(e[1]))
        for u, v in sorted(self.heteroclinic_edges, key=key):
            lines.append(f"  {q(u)} -> {q(v)};")
        for u, v in sorted(self.star_edges, key=key):
            lines.append(f"  {q(u)} -> {q(v)} [style=dashed];")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Reversor:
    mapping: Mapping = field(compare=True)

    def __call__(self, v):
        return self.mapping[v]


# blocking and the full relation


def _blocking_core(z: np.ndarray) -> np.ndarray:
    """``B[a, b]`` is true iff some ``w`` strictly between indices a, b blocks."""
    n = z.shape[0]
    idx = np.arange(n)
    blocked = np.zeros((n, n), dtype=bool)
    for a in range(n - 2):
        row = z[a]
        target = row[None, :]  # z(a, b) per column b
        cond = (row[:, None] == target) & (z == target)
        between = (idx[:, None] > a) & (idx[:, None] < idx[None, :])
        hit = (cond & between).any(axis=0)
        hit[: a + 2] = False
        blocked[a] = hit
    return blocked | blocked.T


def blocking_matrix(sigma: Permutation, z: ZeroMatrix | None = None, order: str = "meander") -> np.ndarray:
    """Blocking verdicts indexed by meander position (0-based).

    ``order`` selects the boundary along which "strictly between" is read:
    ``"meander"`` (x=0, h0) or ``"axis"`` (x=1, h1).
    """
    if z is None:
        z = zero_numbers(sigma, formal=True)
    if order == "meander":
        return _blocking_core(z.z)
    if order == "axis":
        perm = np.array(sigma.image) - 1  # axis index -> meander index
        zx = z.z[np.ix_(perm, perm)]
        bx = _blocking_core(zx)
        out = np.empty_like(bx)
        out[np.ix_(perm, perm)] = bx
        return out
    raise ValueError(f"unknown order {order!r}")


def blockers(sigma: Permutation, z: ZeroMatrix, v1: int, v2: int, order: str = "meander") -> list[int]:
    """All blocking equilibria for the pair (v1, v2), as meander positions."""
    if v1 == v2:
        raise ValueError("blocking needs two distinct equilibria")
    if order == "meander":
        members = range(min(v1, v2) + 1, max(v1, v2))
    elif order == "axis":
        inv = sigma.inverse()
        lo, hi = sorted((inv(v1), inv(v2)))
        members = [sigma(a) for a in range(lo + 1, hi)]
    else:
        raise ValueError(f"unknown order {order!r}")
    target = z(v1, v2)
    return [w for w in members if z(v1, w) == target and z(w, v2) == target]


def is_blocked(sigma: Permutation, z: ZeroMatrix, v1: int, v2: int, order: str = "meander") -> bool:
    return bool(blockers(sigma, z, v1, v2, order))


def _require_morse(sigma: Permutation, formal: bool):
    morse = morse_indices(sigma)
    if morse.formal and not formal:
        raise MeanderError(f"non-Morse meander (i_min={morse.i_min}); pass formal=True to proceed")
    return morse


def _relation_matrix(sigma: Permutation, formal: bool = False) -> np.ndarray:
    morse = _require_morse(sigma, formal)
    z = zero_numbers(sigma, formal=formal)
    blocked = blocking_matrix(sigma, z)
    lv = np.array(morse.values)
    return (lv[:, None] > lv[None, :]) & ~blocked


def full_relation(sigma: Permutation, formal: bool = False) -> frozenset[tuple[int, int]]:
    """All pairs v1 ~> v2 (any Morse gap) by z-adjacency."""
    rel = _relation_matrix(sigma, formal)
    return frozenset((int(a) + 1, int(b) + 1) for a, b in zip(*np.nonzero(rel)))


def connection_graph(sigma: Permutation, pointed: bool = False, formal: bool = False) -> ConnectionGraph:
    morse = _require_morse(sigma, formal)
    rel = _relation_matrix(sigma, formal)
    lv = np.array(morse.values)
    adjacent = rel & (lv[:, None] == lv[None, :] + 1)
    edges = {(int(a) + 1, int(b) + 1) for a, b in zip(*np.nonzero(adjacent))}
    graph = ConnectionGraph({j: morse[j] for j in range(1, sigma.n + 1)}, edges)
    if pointed:
        if morse.formal:
            raise MeanderError("a pointed graph needs a Morse meander")
        graph = graph.with_star(STAR)
    return graph


def transitive_closure(graph: ConnectionGraph) -> frozenset:
    verts = graph.vertices
    index = {v: k for k, v in enumerate(verts)}
    adj = np.zeros((len(verts), len(verts)), dtype=bool)
    for u, v in graph.edges:
        adj[index[u], index[v]] = True
    reach = adj.copy()
    while True:
        nxt = reach | ((reach.astype(np.int64) @ adj.astype(np.int64)) > 0)
        if (nxt == reach).all():
            break
        reach = nxt
    return frozenset((verts[a], verts[b]) for a, b in zip(*np.nonzero(reach)))


def verify_cascading(sigma: Permutation) -> bool:
    """Transitive closure of the graded edges regenerates the full relation."""
    return transitive_closure(connection_graph(sigma)) == full_relation(sigma)


def is_sturm_ball(graph: ConnectionGraph) -> bool:
    g = graph.without_star()
    top = g.level(g.top_level)
    if len(top) != 1:
        return False
    seen, stack = {top[0]}, [top[0]]
    while stack:
        for w in g.successors[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.levels)


# graded matching by backtracking


def _refine_colors(g1, g2, level_map, reverse):
    """Joint colour refinement over the disjoint union of g1 and (reversed) g2."""
    out2, in2 = (g2.predecessors, g2.successors) if reverse else (g2.successors, g2.predecessors)
    adj = {}
    color = {}
    for v in g1.levels:
        adj[(0, v)] = ([(0, u) for u in g1.successors[v]], [(0, u) for u in g1.predecessors[v]])
        color[(0, v)] = level_map(g1.levels[v])
    for w in g2.levels:
        adj[(1, w)] = ([(1, u) for u in out2[w]], [(1, u) for u in in2[w]])
        color[(1, w)] = g2.levels[w]
    n_classes = len(set(color.values()))
    while True:
        sig = {
            x: (color[x], tuple(sorted(color[y] for y in outs)), tuple(sorted(color[y] for y in ins)))
            for x, (outs, ins) in adj.items()
        }
        palette = {s: k for k, s in enumerate(sorted(set(sig.values())))}
        color = {x: palette[s] for x, s in sig.items()}
        if len(palette) == n_classes:
            return color
        n_classes = len(palette)


def _match(g1, g2, level_map, reverse: bool, involution: bool):
    if len(g1.levels) != len(g2.levels) or len(g1.edges) != len(g2.edges):
        return None
    color = _refine_colors(g1, g2, level_map, reverse)
    c1 = Counter(color[(0, v)] for v in g1.levels)
    c2 = Counter(color[(1, w)] for w in g2.levels)
    if c1 != c2:
        return None
    out1, in1 = g1.successors, g1.predecessors
    out2, in2 = (g2.predecessors, g2.successors) if reverse else (g2.successors, g2.predecessors)
    classes: dict = {}
    for w in g2.levels:
        classes.setdefault(color[(1, w)], []).append(w)
    for members in classes.values():
        members.sort(key=_vertex_key)

    # connectivity-first static order
    order, placed = [], set()
    nbrs = {v: out1[v] | in1[v] for v in g1.levels}
    remaining = set(g1.levels)
    while remaining:
        v = min(
            remaining,
            key=lambda x: (-len(nbrs[x] & placed), len(classes[color[(0, x)]]), _vertex_key(x)),
        )
        order.append(v)
        placed.add(v)
        remaining.discard(v)

    f: dict = {}
    finv: dict = {}

    def consistent(v, w) -> bool:
        if w in finv or color[(0, v)] != color[(1, w)]:
            return False
        for u in out1[v]:
            if u in f and f[u] not in out2[w]:
                return False
        for u in in1[v]:
            if u in f and f[u] not in in2[w]:
                return False
        for x in out2[w]:
            if x in finv and finv[x] not in out1[v]:
                return False
        for x in in2[w]:
            if x in finv and finv[x] not in in1[v]:
                return False
        return True

    def assign(v, w):
        f[v] = w
        finv[w] = v

    def unassign(v):
        del finv[f.pop(v)]

    def search(k: int) -> bool:
        while k < len(order) and order[k] in f:
            k += 1
        if k == len(order):
            return True
        v = order[k]
        for w in classes[color[(0, v)]]:
            if not consistent(v, w):
                continue
            assign(v, w)
            if involution and w != v:
                if w in f or not consistent(w, v):
                    unassign(v)
                    continue
                assign(w, v)
            if search(k + 1):
                return True
            unassign(v)
            if involution and w != v and w in f:
                unassign(w)
        return False

    return dict(f) if search(0) else None


def graded_isomorphic(g1: ConnectionGraph, g2: ConnectionGraph) -> dict | None:
    """A level- and edge-preserving bijection g1 -> g2, or None if none exists."""
    if Counter(g1.levels.values()) != Counter(g2.levels.values()):
        return None
    return _match(g1, g2, lambda i: i, reverse=False, involution=False)


def is_reversor(graph: ConnectionGraph, mapping: Mapping) -> bool:
    d = graph.top_level
    verts = set(graph.levels)
    if set(mapping) != verts or set(mapping.values()) != verts:
        return False
    for v in verts:
        if mapping[mapping[v]] != v or graph.levels[mapping[v]] != d - 1 - graph.levels[v]:
            return False
    reversed_edges = {(mapping[v], mapping[u]) for u, v in graph.edges}
    return reversed_edges == set(graph.edges)


def _degree_profile_symmetric(graph: ConnectionGraph) -> bool:
    d = graph.top_level
    for i in range(-1, d + 1):
        a = Counter((graph.in_degree(v), graph.out_degree(v)) for v in graph.level(i))
        b = Counter((graph.out_degree(v), graph.in_degree(v)) for v in graph.level(d - 1 - i))
        if a != b:
            return False
    return True


def find_reversor(graph: ConnectionGraph) -> Reversor | None:
    """Search for an involutive, level-swapping, edge-reversing automorphism.

    The search is exhaustive, so ``None`` is conclusive.
    """
    if not graph.pointed:
        raise ValueError("reversors live on pointed graphs")
    if not graph.morse_polynomial().is_reversible():
        return None
    if not _degree_profile_symmetric(graph):
        return None
    d = graph.top_level
    f = _match(graph, graph, lambda i: d - 1 - i, reverse=True, involution=True)
    if f is None:
        return None
    assert is_reversor(graph, f)
    return Reversor(f)


def degree_profile(graph: ConnectionGraph) -> dict[int, list[tuple[int, int]]]:
    """Sorted (in, out) degree pairs per level; a cheap isomorphism invariant."""
    return {
        i: sorted((graph.in_degree(v), graph.out_degree(v)) for v in graph.level(i))
        for i in range(min(graph.levels.values()), graph.top_level + 1)
    }


def edges_from(relation: Iterable[tuple[int, int]], levels: Mapping[int, int]) -> set:
    return {(u, v) for u, v in relation if levels[u] == levels[v] + 1}
