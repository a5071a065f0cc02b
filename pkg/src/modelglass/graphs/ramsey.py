"""Largest cliques and independent sets, and the homogeneous-set report for stable families."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, balanced_sizes, bits, clique_union, complete_multipartite, random_graph
from .halfgraph import HalfGraphWitness, find_half_graph

DEFAULT_SEARCH_CAP = 64


def _color_bound(adj: Sequence[int], cand: int) -> list[tuple[int, int]]:
    """Greedy coloring of ``cand``; returns (vertex, color) sorted by color ascending."""
    out = []
    color = 0
    rest = cand
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            rest &= ~(1 << v)
            out.append((v, color))
    return out


def clique_number(g: Graph) -> int:
    """Size of a maximum clique, by branch and bound with greedy-coloring bounds."""
    adj = g.adj
    best = 0

    def expand(size: int, cand: int):
        nonlocal best
        for v, color in reversed(_color_bound(adj, cand)):
            if size + color <= best:
                return
            nxt = cand & adj[v]
            if nxt:
                expand(size + 1, nxt)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    if g.n:
        expand(0, g.full)
    return best


def _first_clique(g: Graph, size: int) -> list[int]:
    """The lexicographically least clique of the given size (one must exist)."""
    adj = g.adj
    chosen: list[int] = []

    def extend(cand: int) -> bool:
        need = size - len(chosen)
        if need == 0:
            return True
        if cand.bit_count() < need or max((c for _, c in _color_bound(adj, cand)), default=0) < need:
            return False
        for v in bits(cand):
            chosen.append(v)
            if extend(cand & adj[v] & ~((1 << (v + 1)) - 1)):
                return True
            chosen.pop()
        return False

    extend(g.full)
    return chosen


def max_clique(g: Graph) -> list[int]:
    """A maximum clique; among those, the lexicographically least."""
    return _first_clique(g, clique_number(g))


def greedy_clique(g: Graph) -> list[int]:
    """Repeatedly take the lowest-index vertex of largest remaining degree."""
    clique = []
    cand = g.full
    while cand:
        v = max(bits(cand), key=lambda u: ((g.adj[u] & cand).bit_count(), -u))
        clique.append(v)
        cand &= g.adj[v]
    return sorted(clique)


@dataclass
class Homogeneous:
    clique: list[int]
    independent: list[int]
    exact: bool

    @property
    def hom(self) -> int:
        return max(len(self.clique), len(self.independent))


def max_homogeneous(g: Graph, cap: int = DEFAULT_SEARCH_CAP) -> Homogeneous:
    """Maximum clique and independent set; beyond ``cap`` vertices, greedy answers flagged inexact."""
    if g.n > cap:
        return Homogeneous(greedy_clique(g), greedy_clique(g.complement()), False)
    return Homogeneous(max_clique(g), max_clique(g.complement()), True)


def is_clique(g: Graph, vs: Sequence[int]) -> bool:
    return all(g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def is_independent(g: Graph, vs: Sequence[int]) -> bool:
    return not any(g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


# ---------------------------------------------------------------------------
# Report


FAMILIES = ("cliques", "multipartite", "random")


@dataclass
class RamseyRow:
    family: str
    n: int
    seed: int
    parts: int | None
    stable: bool
    witness: HalfGraphWitness | None = None
    clique: int | None = None
    independent: int | None = None
    exact: bool = True

    @property
    def hom(self) -> int | None:
        if self.clique is None:
            return None
        return max(self.clique, self.independent)

    @property
    def exponent(self) -> float | None:
        """``log_n hom``."""
        if self.hom is None or self.n < 2:
            return None
        return math.log(self.hom) / math.log(self.n)


@dataclass
class RamseyReport:
    family: str
    k: int
    sizes: list[int]
    seed: int
    rows: list[RamseyRow] = field(default_factory=list)

    @property
    def skipped(self) -> list[RamseyRow]:
        return [r for r in self.rows if not r.stable]

    @property
    def measured(self) -> list[RamseyRow]:
        return [r for r in self.rows if r.stable]


def family_instance(family: str, n: int, seed: int) -> tuple[Graph, int | None]:
    """One seeded graph of the family; the part count is returned for the structured ones."""
    rng = random.Random(seed)
    if family == "random":
        return random_graph(n, 0.5, seed), None
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    parts = rng.randint(1, n)
    sizes = balanced_sizes(n, parts)
    g = clique_union(sizes) if family == "cliques" else complete_multipartite(sizes)
    return g, parts


def stable_ramsey_report(family: str, k: int, sizes: Sequence[int], instances: int = 1, seed: int = 0,
                         cap: int = DEFAULT_SEARCH_CAP) -> RamseyReport:
    """Measure ``hom(G)`` on seeded instances, skipping any that contain a ``k``-half-graph."""
    report = RamseyReport(family, k, list(sizes), seed)
    for n in sizes:
        for t in range(instances):
            inst_seed = seed * 1_000_003 + n * 1009 + t
            g, parts = family_instance(family, n, inst_seed)
            w = find_half_graph(g, k)
            if w is not None:
                report.rows.append(RamseyRow(family, n, inst_seed, parts, False, w))
                continue
            h = max_homogeneous(g, cap)
            report.rows.append(RamseyRow(family, n, inst_seed, parts, True, None,
                                         len(h.clique), len(h.independent), h.exact))
    return report
