"""Finite simple graphs stored as neighbor bitsets, with seeded generators."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..structures import Model, load_model
from ..syntax import GRAPH_SIGNATURE


class GraphError(ValueError):
    pass


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError("one neighbor set per vertex is required")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbor out of range")
            for u in bits(nb):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} is out of range for {n} vertices")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def complement(self) -> "Graph":
        full = self.full
        return Graph(self.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(len(vertices), [(index[u], index[v]) for u, v in self.edges()
                                                if u in index and v in index])

    def to_model(self) -> Model:
        return Model(GRAPH_SIGNATURE, self.n, {"E": {(u, v) for u in range(self.n) for v in bits(self.adj[u])}})

    @classmethod
    def from_model(cls, m: Model) -> "Graph":
        if not m.sig.is_relation("E") or m.sig.relation("E").arity != 2:
            raise GraphError("the model has no binary relation E")
        table = m.relation_table("E")
        return cls.from_edges(m.size, [(u, v) for u in m.domain for v in m.domain if table[u, v]])

    def to_edge_list(self) -> str:
        return f"{self.n}\n" + "".join(f"{u} {v}\n" for u, v in self.edges())


# ---------------------------------------------------------------------------
# Input


def parse_edge_list(text: str) -> Graph:
    """``u v`` per line; an optional first line holding one integer fixes the vertex count."""
    edges = []
    n = None
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphError(f"line {lineno}: expected integers, got {line!r}") from None
        if first and len(nums) == 1:
            n = nums[0]
        elif len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise GraphError(f"line {lineno}: expected 'u v'")
        first = False
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(n, edges)


def load_graph(text: str) -> Graph:
    """Edge-list text, or the model format over ``rel E /2``."""
    if re.match(r"\s*(#.*\n\s*)*model\b", text):
        return Graph.from_model(load_model(text, GRAPH_SIGNATURE))
    return parse_edge_list(text)


# ---------------------------------------------------------------------------
# Generators


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    return empty_graph(n).complement()


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique_union(sizes: Sequence[int]) -> Graph:
    """Disjoint cliques of the given sizes, numbered consecutively."""
    adj = []
    start = 0
    for s in sizes:
        block = ((1 << s) - 1) << start
        adj.extend(block & ~(1 << v) for v in range(start, start + s))
        start += s
    return Graph(start, tuple(adj))


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    return clique_union(sizes).complement()


def complete_bipartite(m: int, n: int) -> Graph:
    return complete_multipartite([m, n])


def half_graph(k: int) -> Graph:
    """Vertices ``a_i = i`` and ``b_j = k + j`` (0-based), edge ``a_i b_j`` iff ``i < j``."""
    return Graph.from_edges(2 * k, [(i, k + j) for i in range(k) for j in range(k) if i < j])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def balanced_sizes(n: int, parts: int) -> list[int]:
    q, r = divmod(n, parts)
    return [q + 1] * r + [q] * (parts - r)
