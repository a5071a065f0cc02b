"""Satisfaction, solution sets and boolean algebras of definable sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import engine
from .structures import Model
from .syntax import (
    EQ,
    And,
    App,
    Atom,
    Const,
    Exists,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Param,
    Term,
    Var,
    conj,
    disj,
    eq,
    is_sentence,
    parameters,
    quantifier_rank,
)

DEFAULT_FORMULA_CAP = 100_000


class UnassignedVariable(engine.EvaluationError):
    pass


# ---------------------------------------------------------------------------
# Tarskian evaluation, one assignment at a time


def eval_term(m: Model, t: Term, a: dict[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise UnassignedVariable(f"variable {t.name!r} is unassigned") from None
    if isinstance(t, Const):
        return m.constants[t.name]
    if isinstance(t, Param):
        if not 0 <= t.value < m.size:
            raise engine.EvaluationError(f"parameter {t.value} is not an element of the model")
        return t.value
    return m.apply(t.fn, tuple(eval_term(m, s, a) for s in t.args))


def eval_formula(m: Model, f: Formula, a: dict[str, int] | None = None) -> bool:
    """Whether ``m`` satisfies ``f`` under assignment ``a``.

    Direct recursion on the formula with quantifiers ranging over the whole
    domain; independent of the solution-set engine and used to check it.
    """
    a = dict(a or {})
    missing = f.free_vars - a.keys()
    if missing:
        raise UnassignedVariable(f"unassigned free variables {sorted(missing)}")
    return _sat(m, f, a)


def _sat(m: Model, f: Formula, a: dict[str, int]) -> bool:
    if isinstance(f, Atom):
        args = tuple(eval_term(m, t, a) for t in f.args)
        return m.holds(f.rel, args)
    if isinstance(f, Not):
        return not _sat(m, f.body, a)
    if isinstance(f, And):
        return _sat(m, f.left, a) and _sat(m, f.right, a)
    if isinstance(f, Or):
        return _sat(m, f.left, a) or _sat(m, f.right, a)
    if isinstance(f, Implies):
        return not _sat(m, f.left, a) or _sat(m, f.right, a)
    if isinstance(f, Iff):
        return _sat(m, f.left, a) == _sat(m, f.right, a)
    test = any if isinstance(f, Exists) else all
    return test(_sat(m, f.body, {**a, f.var: e}) for e in m.domain)


def holds(m: Model, sentence: Formula, **kwargs) -> bool:
    """Truth of a sentence, computed by the solution-set engine."""
    return engine.model_check(m, sentence, **kwargs)


# ---------------------------------------------------------------------------
# Definable sets


@dataclass(frozen=True)
class DefinableSet:
    formula: Formula
    vars: tuple[str, ...]
    extension: frozenset[tuple[int, ...]]
    parameters: tuple[int, ...] = ()

    def __contains__(self, item) -> bool:
        return tuple(item) in self.extension

    def __len__(self) -> int:
        return len(self.extension)


def _tuples(mask: np.ndarray) -> frozenset[tuple[int, ...]]:
    return frozenset(tuple(int(x) for x in row) for row in np.argwhere(mask))


def solution_set(m: Model, f: Formula, vars: Sequence[str], cache: bool = True,
                 cell_cap: int = engine.DEFAULT_CELL_CAP) -> DefinableSet:
    """All tuples ``(e1..ek)`` with ``m |= f[v1:=e1, ..., vk:=ek]``."""
    vars = tuple(vars)
    if not vars:
        raise ValueError("solution_set needs at least one variable")
    missing = f.free_vars - set(vars)
    if missing:
        raise ValueError(f"free variables {sorted(missing)} are not listed")
    mask = engine.evaluate(m, f, order=list(vars), cache=cache, cell_cap=cell_cap)
    return DefinableSet(f, vars, _tuples(mask), tuple(sorted(parameters(f))))


def is_boolean_algebra(family: Iterable[Iterable], base: Iterable) -> bool:
    """Contains the empty set and ``base`` and is closed under complement and intersection."""
    base = frozenset(base)
    fam = {frozenset(s) for s in family}
    if frozenset() not in fam or base not in fam:
        return False
    if any(not s <= base for s in fam):
        return False
    if any(base - s not in fam for s in fam):
        return False
    return all(s & t in fam for s, t in itertools.combinations(fam, 2))


# ---------------------------------------------------------------------------
# Enumerating the algebra of definable sets


@dataclass
class Cells:
    """Partition of ``n**k`` tuples into the atoms of a generated algebra."""

    k: int
    masks: list[np.ndarray]
    witnesses: list[Formula]
    generators: int
    complete: bool


def _var_names(k: int) -> list[str]:
    return [f"x{i + 1}" for i in range(k)]


def _terms(m: Model, base: list[Term], depth: int, cap: int) -> tuple[list[Term], bool]:
    terms = list(base)
    layer = list(base)
    for _ in range(depth):
        new = []
        for sym in m.sig.functions:
            for args in itertools.product(terms, repeat=sym.arity):
                if not any(a in layer for a in args):
                    continue
                new.append(App(sym.name, args))
                if len(terms) + len(new) > cap:
                    return terms + new, False
        terms += new
        layer = new
    return terms, True


def _atoms(m: Model, terms: list[Term], cap: int) -> Iterable[Formula]:
    count = 0
    for sym in m.sig.relations:
        for args in itertools.product(terms, repeat=sym.arity):
            if sym.name == EQ and args[0] == args[1]:
                continue
            count += 1
            if count > cap:
                return
            yield Atom(sym.name, args)


def _true(v: str) -> Formula:
    return eq(Var(v), Var(v))


def algebra_cells(m: Model, params: Sequence[int], rank: int, k: int, term_depth: int = 1,
                  formula_cap: int = DEFAULT_FORMULA_CAP, _memo=None) -> Cells:
    """Atoms of the algebra of subsets of ``M^k`` definable by formulas of rank <= ``rank``.

    Generators are the atomic formulas over ``x1..xk``, the parameters and the
    constants (terms nested at most ``term_depth`` deep), plus, when
    ``rank > 0``, the projections of the atoms one level down in ``k + 1``
    variables. Existential quantification commutes with unions, so these
    projections generate every rank-bounded definable set.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    memo = {} if _memo is None else _memo
    key = (rank, k)
    if key in memo:
        return memo[key]
    names = _var_names(k)
    base: list[Term] = [Var(v) for v in names] + [Const(c) for c in m.sig.constants]
    base += [Param(p) for p in params]
    terms, complete = _terms(m, base, term_depth, formula_cap)
    ev = engine.Evaluator(m)
    masks: list[np.ndarray] = [np.ones((m.size,) * k, dtype=bool)]
    formulas: list[Formula] = [_true(names[0])]
    seen = {masks[0].tobytes()}

    def add(f: Formula, mask: np.ndarray):
        key = mask.tobytes()
        if key not in seen:
            seen.add(key)
            masks.append(mask)
            formulas.append(f)

    tried = 0
    for atom in _atoms(m, terms, formula_cap):
        tried += 1
        add(atom, _as_mask(ev, atom, names, m.size))
    if tried >= formula_cap:
        complete = False
    if rank > 0:
        lower = algebra_cells(m, params, rank - 1, k + 1, term_depth, formula_cap, memo)
        complete = complete and lower.complete
        for cell, witness in zip(lower.masks, lower.witnesses):
            add(Exists(_var_names(k + 1)[-1], witness), cell.any(axis=-1))
            tried += 1
    cells = _partition(masks, formulas, names[0])
    cells.generators = tried
    cells.k = k
    cells.complete = complete
    memo[key] = cells
    return cells


def _as_mask(ev: engine.Evaluator, f: Formula, names: list[str], n: int) -> np.ndarray:
    table = ev.formula(f, {})
    return np.array(engine._as_order(table, tuple(names), n))


def _partition(masks: list[np.ndarray], formulas: list[Formula], var: str) -> Cells:
    shape = masks[0].shape
    stack = np.stack([mk.ravel() for mk in masks])  # generators x points
    _, labels = np.unique(stack.T, axis=0, return_inverse=True)
    labels = labels.ravel()
    order = []
    for point in range(stack.shape[1]):
        if labels[point] not in order:
            order.append(labels[point])
    out_masks, witnesses = [], []
    for lab in order:
        target = labels == lab
        current = np.ones_like(target)
        literals = []
        for g, f in zip(stack, formulas):
            # pick literals that cut the candidate set down toward the cell
            pos = g[target].all()
            lit = g if pos else ~g
            if (current & ~lit).any():
                current = current & lit
                literals.append(f if pos else Not(f))
            if np.array_equal(current, target):
                break
        witnesses.append(conj(literals) if literals else _true(var))
        out_masks.append(target.reshape(shape))
    return Cells(len(shape), out_masks, witnesses, len(masks), True)


@dataclass
class DefinableAlgebra:
    k: int
    rank_bound: int
    parameters: tuple[int, ...]
    sets: list[DefinableSet]
    cells: list[frozenset[tuple[int, ...]]]
    complete: bool
    generators: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def extensions(self) -> list[frozenset[tuple[int, ...]]]:
        return [s.extension for s in self.sets]


def definable_algebra(m: Model, params: Sequence[int], rank_bound: int, k: int, term_depth: int = 1,
                      formula_cap: int = DEFAULT_FORMULA_CAP, set_cap: int = DEFAULT_FORMULA_CAP) -> DefinableAlgebra:
    """Every distinct subset of ``M^k`` definable with parameters from ``params`` at rank <= ``rank_bound``.

    Each set comes with one witness formula in the variables ``x1..xk``. The
    result is flagged incomplete when the atomic-formula enumeration hits
    ``formula_cap`` or the number of sets would exceed ``set_cap``.
    """
    params = tuple(params)
    for p in params:
        if not 0 <= p < m.size:
            raise ValueError(f"parameter {p} is not an element of the model")
    cells = algebra_cells(m, params, rank_bound, k, term_depth, formula_cap)
    names = _var_names(k)
    complete = cells.complete
    notes = []
    count = len(cells.masks)
    total = 1 << count
    if total > set_cap:
        complete = False
        notes.append(f"{total} sets exceed the cap of {set_cap}; listing the first {set_cap}")
        total = set_cap
    if not cells.complete:
        notes.append(f"formula enumeration stopped at the cap of {formula_cap}")
    sets = []
    zero = np.zeros((m.size,) * k, dtype=bool)
    for bits in range(total):
        members = [i for i in range(count) if bits >> i & 1]
        mask = zero.copy()
        for i in members:
            mask |= cells.masks[i]
        if members:
            witness = disj(cells.witnesses[i] for i in members)
        else:
            witness = Not(_true(names[0]))
        sets.append(DefinableSet(witness, tuple(names), _tuples(mask), params))
    return DefinableAlgebra(
        k, rank_bound, params, sets, [_tuples(c) for c in cells.masks], complete, cells.generators, notes
    )


# ---------------------------------------------------------------------------
# Theories


@dataclass
class TheoryComparison:
    rows: list[tuple[Formula, bool, bool]]

    @property
    def agree(self) -> bool:
        return all(a == b for _, a, b in self.rows)

    @property
    def disagreements(self) -> list[Formula]:
        return [f for f, a, b in self.rows if a != b]


def same_theory_on(m: Model, n: Model, sentences: Iterable[Formula]) -> TheoryComparison:
    """Compare truth values sentence by sentence.

    Agreement is necessary for elementary equivalence, never sufficient.
    """
    rows = []
    for s in sentences:
        if not is_sentence(s):
            raise ValueError(f"not a sentence: {s}")
        rows.append((s, holds(m, s), holds(n, s)))
    return TheoryComparison(rows)


__all__ = [
    "DefinableAlgebra",
    "DefinableSet",
    "TheoryComparison",
    "UnassignedVariable",
    "algebra_cells",
    "definable_algebra",
    "eval_formula",
    "eval_term",
    "holds",
    "is_boolean_algebra",
    "quantifier_rank",
    "same_theory_on",
    "solution_set",
]
