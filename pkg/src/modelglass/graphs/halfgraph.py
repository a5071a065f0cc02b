"""Half-graphs and the order property.

A witness of height ``k`` is ``a_1..a_k, b_1..b_k`` with ``R(a_i, b_j)`` iff
``i < j``. The search walks over ``a``-sequences only: once ``a_1..a_i`` are
fixed, the admissible ``b_j`` form a bitset (neighbors of the earlier ``a``s,
non-neighbors of the later ones), and distinct ``j`` give disjoint bitsets,
so the ``b``s never collide with each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from ..engine import evaluate
from ..structures import Model
from ..syntax import Formula, print_formula
from .graph import Graph


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class HalfGraphWitness:
    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def height(self) -> int:
        return len(self.a)

    def __str__(self) -> str:
        return "a=" + ",".join(map(str, self.a)) + " b=" + ",".join(map(str, self.b))


def _search(rows: Sequence[int], n: int, k: int, distinct: bool) -> HalfGraphWitness | None:
    full = (1 << n) - 1
    inverse = [full & ~r for r in rows]
    a: list[int] = []

    def extend(cands: list[int], future: int, used: int) -> HalfGraphWitness | None:
        i = len(a)
        if i == k:
            return HalfGraphWitness(tuple(a), tuple((c & -c).bit_length() - 1 for c in cands))
        for v in range(n):
            if used >> v & 1:
                continue
            strip = ~(1 << v) if distinct else -1
            # b_1..b_i must avoid R(v, .); b_{i+1} comes out of the future set
            new = [c & inverse[v] & strip for c in cands]
            new.append(future & inverse[v] & strip)
            if not all(new):
                continue
            nxt = future & rows[v] & strip
            if nxt.bit_count() < k - i - 1:
                continue
            a.append(v)
            found = extend(new, nxt, used | 1 << v)
            if found:
                return found
            a.pop()
        return None

    return extend([], full, 0)


def find_half_graph(g: Graph, k: int) -> HalfGraphWitness | None:
    """A half-graph of height ``k`` in ``g`` with all ``2k`` vertices distinct, or None."""
    if k < 1:
        raise ValueError("height must be at least 1")
    if 2 * k > g.n:
        return None
    return _search(g.adj, g.n, k, distinct=True)


def check_half_graph(g: Graph, w: HalfGraphWitness) -> bool:
    """Validate a witness directly against the edge pattern."""
    verts = list(w.a) + list(w.b)
    if len(w.a) != len(w.b) or len(set(verts)) != len(verts):
        return False
    return all(g.has_edge(ai, bj) == (i < j) for i, ai in enumerate(w.a) for j, bj in enumerate(w.b))


def half_graph_oracle(g: Graph, k: int) -> bool:
    """Exhaustive check: every ordered ``a``-tuple, then every choice of ``b``s."""
    if 2 * k > g.n:
        return False
    for a in itertools.permutations(range(g.n), k):
        options = []
        for j in range(k):
            options.append([v for v in range(g.n) if v not in a
                            and all(g.has_edge(a[i], v) == (i < j) for i in range(k))])
        for b in itertools.product(*options):
            if len(set(b)) == k:
                return True
    return False


def order_property(m: Model, phi: Formula, x: str, y: str, k: int,
                   distinct: bool = True) -> HalfGraphWitness | None:
    """Elements with ``phi(a_i; b_j)`` iff ``i < j``, read off the solution set of ``phi``.

    With ``distinct`` (the default) the ``b``s must avoid the ``a``s, matching
    the graph case.
    """
    free = set(phi.free_vars)
    if x == y or not {x, y} >= free:
        raise SplitError(f"{print_formula(phi)} must have its free variables among the split ({x}; {y})")
    table = evaluate(m, phi, order=[x, y])
    if k < 1:
        raise ValueError("height must be at least 1")
    rows = [sum(1 << b for b in range(m.size) if table[a, b]) for a in range(m.size)]
    return _search(rows, m.size, k, distinct)


def check_order_witness(m: Model, phi: Formula, x: str, y: str, w: HalfGraphWitness) -> bool:
    table = evaluate(m, phi, order=[x, y])
    return all(bool(table[ai, bj]) == (i < j) for i, ai in enumerate(w.a) for j, bj in enumerate(w.b))

