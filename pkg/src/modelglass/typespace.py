"""Types over parameter sets in finite models.

A partial type is a set of one-variable formulas with parameters whose
solution sets generate a filter on the domain. In a finite model every
complete type is the type of an element, so complete types are reported as
blocks of the domain, stratified by quantifier rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .filters import SetFamily
from .semantics import DEFAULT_FORMULA_CAP, algebra_cells, solution_set
from .structures import Model
from .syntax import EQ, Formula, parameters, print_formula


class TypeError_(ValueError):
    pass


@dataclass(frozen=True)
class PartialType:
    model: Model
    params: tuple[int, ...]
    formulas: tuple[Formula, ...]
    extensions: tuple[frozenset[int], ...]

    @property
    def family(self) -> SetFamily:
        return SetFamily.of(self.extensions, self.model.size)


@dataclass(frozen=True)
class TypeVerdict:
    is_partial_type: bool
    realizations: frozenset[int]
    partial_type: PartialType
    # formulas whose joint solution set is empty, when rejected
    conflict: tuple[Formula, ...] = ()

    def __bool__(self) -> bool:
        return self.is_partial_type


def _one_variable(f: Formula) -> str:
    free = sorted(f.free_vars)
    if len(free) != 1:
        raise TypeError_(f"formula {print_formula(f)} has free variables {free}; exactly one is required")
    return free[0]


def check_partial_type(m: Model, params: Sequence[int], formulas: Sequence[Formula]) -> TypeVerdict:
    """Whether the solution sets of ``formulas`` have the finite intersection property.

    On a finite model this is the same as a nonempty total intersection, which
    is then the set of realizations.
    """
    params = tuple(params)
    allowed = set(params)
    extensions = []
    for f in formulas:
        var = _one_variable(f)
        stray = parameters(f) - allowed
        if stray:
            raise TypeError_(f"parameters {sorted(stray)} of {print_formula(f)} are outside the parameter set")
        ext = solution_set(m, f, [var]).extension
        extensions.append(frozenset(t[0] for t in ext))
    p = PartialType(m, params, tuple(formulas), tuple(extensions))
    current = frozenset(m.domain)
    used = []
    for f, ext in zip(formulas, extensions):
        current &= ext
        used.append(f)
        if not current:
            return TypeVerdict(False, frozenset(), p, tuple(used))
    return TypeVerdict(True, current, p)


def realizations(m: Model, p: PartialType | TypeVerdict) -> frozenset[int]:
    if isinstance(p, TypeVerdict):
        if not p:
            raise TypeError_("not a partial type: its solution sets have empty intersection")
        return p.realizations
    verdict = check_partial_type(m, p.params, p.formulas)
    if not verdict:
        raise TypeError_("not a partial type: its solution sets have empty intersection")
    return verdict.realizations


@dataclass
class TypePartition:
    params: tuple[int, ...]
    rank_bound: int
    term_depth: int
    blocks: list[frozenset[int]]
    witnesses: list[int]
    formulas: list[Formula]
    complete: bool

    def block_of(self, e: int) -> int:
        for i, b in enumerate(self.blocks):
            if e in b:
                return i
        raise KeyError(e)


def complete_types(m: Model, params: Sequence[int], rank_bound: int, term_depth: int = 1,
                   formula_cap: int = DEFAULT_FORMULA_CAP) -> TypePartition:
    """Partition the domain by the rank-bounded complete types over ``params``.

    Two elements share a block iff they satisfy the same one-variable formulas
    with parameters from ``params`` of quantifier rank at most ``rank_bound``
    (atomic terms nested at most ``term_depth`` deep).
    """
    params = tuple(sorted(set(params)))
    for p in params:
        if not 0 <= p < m.size:
            raise TypeError_(f"parameter {p} is not an element of the model")
    cells = algebra_cells(m, params, rank_bound, 1, term_depth, formula_cap)
    entries = []
    for mask, witness in zip(cells.masks, cells.witnesses):
        block = frozenset(int(i) for i in mask.nonzero()[0])
        entries.append((min(block), block, witness))
    entries.sort(key=lambda e: e[0])
    return TypePartition(
        params,
        rank_bound,
        term_depth,
        [e[1] for e in entries],
        [e[0] for e in entries],
        [e[2] for e in entries],
        cells.complete,
    )


# ---------------------------------------------------------------------------
# The rationals as a dense linear order


@dataclass(frozen=True)
class DloTypes:
    count: int
    descriptions: tuple[str, ...]


def count_dlo_types(n: int) -> DloTypes:
    """Complete 1-types over ``a1 < ... < an`` in a dense order without endpoints.

    One type per parameter (realized), one per gap between consecutive
    parameters, and the two ends; with no parameters, the single type ``x = x``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return DloTypes(1, ("x = x",))
    out = ["x < a1"]
    for i in range(1, n + 1):
        out.append(f"x = a{i}")
        if i < n:
            out.append(f"a{i} < x < a{i + 1}")
    out.append(f"x > a{n}")
    return DloTypes(len(out), tuple(out))


def dlo_atom_count(n: int, step: Fraction = Fraction(1, 3)) -> int:
    """Count realized sign patterns of ``{x < ai, x = ai}`` over a rational grid.

    Parameters sit at ``1..n``; ``x`` ranges over multiples of ``step`` in
    ``[-1, n + 2]``, which meets every interval and point the pattern can
    distinguish in the rationals.
    """
    points = []
    x = Fraction(-1)
    while x <= n + 2:
        points.append(x)
        x += step
    patterns = set()
    for x in points:
        patterns.add(tuple(s for a in range(1, n + 1) for s in (x < a, x == a)))
    return len(patterns)


# ---------------------------------------------------------------------------
# Saturation relative to an embedding


class EmbeddingError(ValueError):
    pass


def check_embedding(m: Model, n: Model, emb: Mapping[int, int]) -> None:
    """Raise unless ``emb`` is injective and preserves and reflects every atomic formula."""
    if m.sig != n.sig:
        raise EmbeddingError("models have different signatures")
    if sorted(emb) != list(m.domain):
        raise EmbeddingError("the map must be defined on every element of the source")
    image = [emb[i] for i in m.domain]
    if any(not 0 <= v < n.size for v in image):
        raise EmbeddingError("the map leaves the target domain")
    if len(set(image)) != len(image):
        raise EmbeddingError("the map is not injective")
    for sym in m.sig.relations:
        if sym.name == EQ:
            continue
        for args in itertools.product(m.domain, repeat=sym.arity):
            if m.holds(sym.name, args) != n.holds(sym.name, tuple(emb[a] for a in args)):
                raise EmbeddingError(f"{sym.name}{args} is not preserved")
    for sym in m.sig.functions:
        for args in itertools.product(m.domain, repeat=sym.arity):
            if emb[m.apply(sym.name, args)] != n.apply(sym.name, tuple(emb[a] for a in args)):
                raise EmbeddingError(f"{sym.name}{args} does not commute with the map")
    for c in m.sig.constants:
        if emb[m.constants[c]] != n.constants[c]:
            raise EmbeddingError(f"constant {c} is not preserved")


@dataclass
class SaturationRow:
    block: frozenset[int]
    formula: Formula
    realized_in_image: bool
    realizer: int  # an element of the target model
    preimage: int | None = None


@dataclass
class SaturationReport:
    rank_bound: int
    params: tuple[int, ...]  # in the target model
    rows: list[SaturationRow] = field(default_factory=list)
    complete: bool = True

    @property
    def omitted(self) -> list[SaturationRow]:
        return [r for r in self.rows if not r.realized_in_image]


def saturation_report(m: Model, n: Model, emb: Mapping[int, int], params: Sequence[int] | None = None,
                      rank_bound: int = 1, term_depth: int = 1) -> SaturationReport:
    """Which rank-bounded types of ``n`` over ``emb(params)`` the image of ``m`` realizes."""
    check_embedding(m, n, emb)
    params = list(m.domain) if params is None else list(params)
    image_params = tuple(sorted(emb[a] for a in params))
    part = complete_types(n, image_params, rank_bound, term_depth)
    inverse = {v: k for k, v in emb.items()}
    rows = []
    for block, formula in zip(part.blocks, part.formulas):
        inside = sorted(block & set(inverse))
        if inside:
            rows.append(SaturationRow(block, formula, True, inside[0], inverse[inside[0]]))
        else:
            rows.append(SaturationRow(block, formula, False, min(block)))
    return SaturationReport(rank_bound, image_params, rows, part.complete)
