"""Ultraproducts of finitely many finite models.

The quotient is built generically: product tuples are grouped by agreement on
an ultrafilter member, and relations and functions are decided coordinatewise
by ultrafilter majority. Over a finite index set every ultrafilter is
principal, so the result is isomorphic to one factor; that collapse is checked
by :func:`iso_check`, never assumed (unless ``collapse=True`` is requested).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .filters import SetFamily, is_ultrafilter, principal_point
from .semantics import holds
from .structures import Model, cyclic_ring
from .syntax import (
    EQ,
    App,
    Atom,
    Formula,
    Implies,
    Not,
    Var,
    build_ax_sentence,
    ax_coefficient_count,
    conj,
    eq,
    exists,
    forall,
    is_sentence,
    quantifier_rank,
    RING_SIGNATURE,
)

DEFAULT_PRODUCT_CAP = 1_000_000


class UltraproductError(ValueError):
    pass


@dataclass
class UltraproductModel:
    model: Model
    representatives: list[tuple[int, ...]]
    ultrafilter: SetFamily
    class_of: dict[tuple[int, ...], int] = field(repr=False)

    @property
    def size(self) -> int:
        return self.model.size


def _check_family(models: Sequence[Model], d: SetFamily) -> None:
    if not models:
        raise UltraproductError("the index set must be nonempty")
    sig = models[0].sig
    if any(m.sig != sig for m in models):
        raise UltraproductError("signature mismatch among the factors")
    if d.base_size != len(models):
        raise UltraproductError(f"ultrafilter lives on {d.base_size} indices, family has {len(models)}")
    if not is_ultrafilter(d):
        raise UltraproductError("D is not an ultrafilter on the index set")


def _agree(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    mask = 0
    for i, (x, y) in enumerate(zip(a, b)):
        if x == y:
            mask |= 1 << i
    return mask


def ultraproduct(models: Sequence[Model], d: SetFamily, seed: int | None = None, collapse: bool = False,
                 product_cap: int = DEFAULT_PRODUCT_CAP) -> UltraproductModel:
    """The ultraproduct of ``models`` by the ultrafilter ``d``.

    Representatives default to the lexicographically least tuple in each class;
    with ``seed`` set, a random member of each class is used instead (the
    quotient must not change).
    """
    models = list(models)
    _check_family(models, d)
    if collapse:
        return _collapsed(models, d)
    members = d.members
    sizes = [m.size for m in models]
    total = 1
    for s in sizes:
        total *= s
    if total > product_cap:
        raise UltraproductError(f"product of {total} tuples exceeds the cap of {product_cap}")

    reps: list[tuple[int, ...]] = []
    class_of: dict[tuple[int, ...], int] = {}
    classes: list[list[tuple[int, ...]]] = []
    for tup in itertools.product(*(range(s) for s in sizes)):
        for c, rep in enumerate(reps):
            if _agree(tup, rep) in members:
                class_of[tup] = c
                classes[c].append(tup)
                break
        else:
            class_of[tup] = len(reps)
            reps.append(tup)
            classes.append([tup])
    if seed is not None:
        rng = random.Random(seed)
        reps = [rng.choice(cls) for cls in classes]

    n = len(reps)
    sig = models[0].sig
    relations = {}
    for sym in sig.relations:
        if sym.name == EQ:
            continue
        tuples = set()
        for args in itertools.product(range(n), repeat=sym.arity):
            mask = 0
            for i, m in enumerate(models):
                if m.holds(sym.name, tuple(reps[a][i] for a in args)):
                    mask |= 1 << i
            if mask in members:
                tuples.add(args)
        relations[sym.name] = tuples
    functions = {}
    for sym in sig.functions:
        table = {}
        for args in itertools.product(range(n), repeat=sym.arity):
            image = tuple(m.apply(sym.name, tuple(reps[a][i] for a in args)) for i, m in enumerate(models))
            table[args] = class_of[image]
        functions[sym.name] = table
    constants = {c: class_of[tuple(m.constants[c] for m in models)] for c in sig.constants}
    quotient = Model(sig, n, relations, functions, constants)
    return UltraproductModel(quotient, reps, d, class_of)


def _collapsed(models: list[Model], d: SetFamily) -> UltraproductModel:
    i0 = principal_point(d)
    factor = models[i0]
    reps = [tuple(e if i == i0 else 0 for i in range(len(models))) for e in factor.domain]
    sizes = [m.size for m in models]
    class_of = {t: t[i0] for t in itertools.product(*(range(s) for s in sizes))}
    return UltraproductModel(factor, reps, d, class_of)


# ---------------------------------------------------------------------------
# Łoś transfer


@dataclass
class LosReport:
    sentence: Formula
    ultraproduct_holds: bool
    factor_holds: list[bool]
    large: bool  # whether {i : M_i |= s} is in D

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(i for i, t in enumerate(self.factor_holds) if t)

    @property
    def consistent(self) -> bool:
        return self.ultraproduct_holds == self.large


def los_check(models: Sequence[Model], d: SetFamily, s: Formula, up: UltraproductModel | None = None) -> LosReport:
    """Evaluate ``s`` in the ultraproduct and in each factor and compare."""
    if not is_sentence(s):
        raise UltraproductError(f"not a sentence: free variables {sorted(s.free_vars)}")
    if up is None:
        up = ultraproduct(models, d)
    factors = [holds(m, s) for m in models]
    mask = sum(1 << i for i, t in enumerate(factors) if t)
    return LosReport(s, holds(up.model, s), factors, mask in d.members)


# ---------------------------------------------------------------------------
# Isomorphism


@dataclass
class IsoResult:
    verdict: str  # 'isomorphic', 'not isomorphic', 'inconclusive'
    mapping: dict[int, int] | None = None
    witness: Formula | None = None
    nodes: int = 0

    @property
    def isomorphic(self) -> bool:
        return self.verdict == "isomorphic"


def _invariant(m: Model, e: int) -> tuple:
    inv = []
    for sym in m.sig.relations:
        if sym.name == EQ:
            continue
        table = m.relation_table(sym.name)
        for pos in range(sym.arity):
            inv.append(int(table.take(e, axis=pos).sum()))
        inv.append(bool(table[(e,) * sym.arity]))
    for sym in m.sig.functions:
        table = m.function_table(sym.name)
        inv.append(int(table[(e,) * sym.arity]) == e)
        inv.append(int((table == e).sum()))
    inv.extend(m.constants[c] == e for c in m.sig.constants)
    return tuple(inv)


def _consistent(a: Model, b: Model, h: dict[int, int], inv_h: dict[int, int], new: int) -> bool:
    mapped = list(h)
    for sym in a.sig.relations:
        if sym.name == EQ:
            continue
        for args in itertools.product(mapped, repeat=sym.arity):
            if new not in args:
                continue
            if a.holds(sym.name, args) != b.holds(sym.name, tuple(h[x] for x in args)):
                return False
    for sym in a.sig.functions:
        for args in itertools.product(mapped, repeat=sym.arity):
            if new not in args:
                continue
            va = a.apply(sym.name, args)
            vb = b.apply(sym.name, tuple(h[x] for x in args))
            if va in h and h[va] != vb:
                return False
            if vb in inv_h and inv_h[vb] != va:
                return False
    return True


def _is_isomorphism(a: Model, b: Model, h: dict[int, int]) -> bool:
    return a.relabel([h[i] for i in a.domain]) == b


def distinguishing_sentences(sig, max_size: int) -> list[Formula]:
    """Small existential and universal sentences tried as non-isomorphism witnesses."""
    out: list[Formula] = []
    xs = [Var(f"x{i}") for i in range(1, 5)]
    names = [v.name for v in xs]
    for sym in sig.relations:
        if sym.name == EQ:
            continue
        r = sym.arity
        out.append(exists(names[:r], Atom(sym.name, tuple(xs[:r]))))
        out.append(exists(names[:1], Atom(sym.name, (xs[0],) * r)))
        out.append(forall(names[:1], exists(names[1:r] or names[:1], Atom(sym.name, tuple(xs[:r])))))
        if r == 2:
            for length in (2, 3):
                chain = conj(Atom(sym.name, (xs[i], xs[i + 1])) for i in range(length))
                out.append(exists(names[: length + 1], chain))
            out.append(exists(names[:1], forall(names[1:2], Not(Atom(sym.name, (xs[0], xs[1]))))))
            out.append(forall(names[:2], Implies(Atom(sym.name, (xs[0], xs[1])), Atom(sym.name, (xs[1], xs[0])))))
    for sym in sig.functions:
        r = sym.arity
        out.append(exists(names[:1], eq(App(sym.name, (xs[0],) * r), xs[0])))
        if r == 2:
            out.append(forall(names[:2], eq(App(sym.name, (xs[0], xs[1])), App(sym.name, (xs[1], xs[0])))))
    for size in range(2, max_size + 2):
        vs = [Var(f"x{i}") for i in range(1, size + 1)]
        distinct = conj(Not(eq(vs[i], vs[j])) for i in range(size) for j in range(i + 1, size))
        out.append(exists([v.name for v in vs], distinct))
    return out


def find_distinguishing(a: Model, b: Model) -> Formula | None:
    for s in distinguishing_sentences(a.sig, min(max(a.size, b.size), 5)):
        if holds(a, s) != holds(b, s):
            return s
    return None


def iso_check(up: UltraproductModel | Model, m: Model, node_cap: int = 200_000) -> IsoResult:
    """Search for an isomorphism by backtracking with invariant pruning."""
    a = up.model if isinstance(up, UltraproductModel) else up
    if a.sig != m.sig:
        raise UltraproductError("models have different signatures")
    if a.size != m.size:
        return IsoResult("not isomorphic", witness=find_distinguishing(a, m))
    inv_a = [_invariant(a, e) for e in a.domain]
    inv_b = [_invariant(m, e) for e in m.domain]
    if sorted(inv_a) != sorted(inv_b):
        return IsoResult("not isomorphic", witness=find_distinguishing(a, m))
    # rarest invariants first
    order = sorted(a.domain, key=lambda e: (inv_a.count(inv_a[e]), e))
    h: dict[int, int] = {}
    inv_h: dict[int, int] = {}
    nodes = 0

    def search(i: int) -> bool | None:
        # True: found; False: exhausted; None: node cap hit
        nonlocal nodes
        if i == len(order):
            return _is_isomorphism(a, m, h)
        e = order[i]
        for c in m.domain:
            if c in inv_h or inv_b[c] != inv_a[e]:
                continue
            nodes += 1
            if nodes > node_cap:
                return None
            h[e] = c
            inv_h[c] = e
            found = _consistent(a, m, h, inv_h, e) and search(i + 1)
            if found:
                return True
            del h[e], inv_h[c]
            if found is None:
                return None
        return False

    found = search(0)
    if found:
        return IsoResult("isomorphic", dict(sorted(h.items())), nodes=nodes)
    if found is None:
        return IsoResult("inconclusive", nodes=nodes)
    return IsoResult("not isomorphic", witness=find_distinguishing(a, m), nodes=nodes)


# ---------------------------------------------------------------------------
# Ax's sentences in finite fields


@dataclass
class AxReport:
    n: int
    k: int
    p: int
    holds: bool
    coefficients: int
    quantifier_rank: int
    seconds: float
    sentence: Formula = field(repr=False)


def ax_check(n: int, k: int, p: int) -> AxReport:
    """Evaluate the injective-implies-surjective sentence for degree ``k`` maps on ``F_p^n``."""
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    sentence = build_ax_sentence(n, k)
    field_ = cyclic_ring(p, RING_SIGNATURE)
    start = time.perf_counter()
    value = holds(field_, sentence)
    return AxReport(n, k, p, value, ax_coefficient_count(n, k), quantifier_rank(sentence),
                    time.perf_counter() - start, sentence)
