"""Bottom-up solution-set engine.

Every subformula is materialized as a dense boolean array with one axis per
free variable (its solution set), terms as dense integer arrays. A block of
like quantifiers over a conjunction is evaluated as a tensor contraction over
the quantified axes (``einsum`` on 0/1 arrays), so joins on shared variables
go through BLAS. When an operand or result would exceed ``cell_cap`` entries,
the block is evaluated by looping over the values of one of its quantified
variables instead of materializing that axis.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .structures import Model
from .syntax import (
    EQ,
    And,
    Atom,
    Binary,
    Const,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Param,
    Quantifier,
    Term,
    Var,
)

DEFAULT_CELL_CAP = 1 << 24
DEFAULT_MEMO_BUDGET = 1 << 27


class EvaluationError(ValueError):
    pass


class TooLarge(EvaluationError):
    """A dense intermediate would exceed the configured cell cap."""


@dataclass(frozen=True)
class Table:
    """Dense values over the named axes, all of length ``n``."""

    vars: tuple[str, ...]
    data: np.ndarray


def _align(tables: list[Table], n: int) -> tuple[tuple[str, ...], list[np.ndarray]]:
    order: list[str] = []
    for t in tables:
        for v in t.vars:
            if v not in order:
                order.append(v)
    out = []
    for t in tables:
        pos = sorted(range(len(t.vars)), key=lambda i: order.index(t.vars[i]))
        data = t.data.transpose(pos) if t.vars else t.data
        shape = [n if v in t.vars else 1 for v in order]
        out.append(data.reshape(shape))
    return tuple(order), out


def _as_order(t: Table, order: tuple[str, ...], n: int) -> np.ndarray:
    """``t`` broadcast onto the axes ``order`` (a superset of ``t.vars``)."""
    pos = sorted(range(len(t.vars)), key=lambda i: order.index(t.vars[i]))
    data = t.data.transpose(pos) if t.vars else t.data
    data = data.reshape([n if v in t.vars else 1 for v in order])
    return np.broadcast_to(data, (n,) * len(order))


class Evaluator:
    """Evaluates terms and formulas of one model; the memo lives as long as the evaluator."""

    def __init__(self, model: Model, cell_cap: int = DEFAULT_CELL_CAP, cache: bool = True,
                 memo_budget: int = DEFAULT_MEMO_BUDGET):
        self.model = model
        self.n = model.size
        self.cell_cap = cell_cap
        self.cache = cache
        self.memo: dict = {}
        self.memo_budget = memo_budget
        self.memo_cells = 0
        self.stats = {"splits": 0, "contractions": 0, "memo_hits": 0}

    # -- helpers ---------------------------------------------------------
    def _size(self, nvars: int) -> int:
        return self.n ** nvars

    def _check(self, nvars: int):
        if self._size(nvars) > self.cell_cap:
            raise TooLarge(f"{nvars} free axes over a domain of {self.n} exceed the cell cap {self.cell_cap}")

    def _open(self, node, env: dict[str, int]) -> list[str]:
        return [v for v in node.free_vars if v not in env]

    def _key(self, node, env):
        return node, tuple(sorted((v, env[v]) for v in node.free_vars if v in env))

    def _remember(self, key, value: Table) -> Table:
        if self.cache and self.memo_cells + value.data.size <= self.memo_budget:
            self.memo[key] = value
            self.memo_cells += value.data.size
        return value

    # -- terms ------------------------------------------------------------
    def term(self, t: Term, env: dict[str, int]) -> Table:
        if isinstance(t, Var):
            if t.name in env:
                return Table((), np.array(env[t.name]))
            return Table((t.name,), np.arange(self.n))
        if isinstance(t, Const):
            return Table((), np.array(self.model.constants[t.name]))
        if isinstance(t, Param):
            if not 0 <= t.value < self.n:
                raise EvaluationError(f"parameter {t.value} is not an element of the model")
            return Table((), np.array(t.value))
        key = self._key(t, env)
        hit = self.memo.get(key) if self.cache else None
        if hit is not None:
            self.stats["memo_hits"] += 1
            return hit
        args = [self.term(a, env) for a in t.args]
        order, arrays = _align(args, self.n)
        self._check(len(order))
        table = self.model.function_table(t.fn)
        value = table[tuple(arrays)]
        value = np.broadcast_to(value, (self.n,) * len(order))
        return self._remember(key, Table(order, value))

    # -- formulas -----------------------------------------------------------
    def formula(self, f: Formula, env: dict[str, int]) -> Table:
        key = self._key(f, env)
        if self.cache:
            hit = self.memo.get(key)
            if hit is not None:
                self.stats["memo_hits"] += 1
                return hit
        self._check(len(self._open(f, env)))
        if isinstance(f, Atom):
            value = self._atom(f, env)
        elif isinstance(f, Not):
            inner = self.formula(f.body, env)
            value = Table(inner.vars, ~inner.data)
        elif isinstance(f, Binary):
            value = self._binary(f, env)
        else:
            value = self._block(f, env)
        return self._remember(key, value)

    def _atom(self, f: Atom, env) -> Table:
        args = [self.term(a, env) for a in f.args]
        order, arrays = _align(args, self.n)
        if f.rel == EQ:
            data = arrays[0] == arrays[1]
        else:
            data = self.model.relation_table(f.rel)[tuple(arrays)]
        return Table(order, np.broadcast_to(data, (self.n,) * len(order)))

    def _binary(self, f: Binary, env) -> Table:
        left = self.formula(f.left, env)
        right = self.formula(f.right, env)
        order, (a, b) = _align([left, right], self.n)
        if isinstance(f, And):
            data = a & b
        elif isinstance(f, Or):
            data = a | b
        elif isinstance(f, Implies):
            data = ~a | b
        elif isinstance(f, Iff):
            data = a == b
        else:
            raise EvaluationError(f"unknown connective {type(f).__name__}")
        return Table(order, np.broadcast_to(data, (self.n,) * len(order)))

    def _block(self, f: Quantifier, env) -> Table:
        kind = type(f)
        qvars: list[str] = []
        body: Formula = f
        while isinstance(body, kind):
            if body.var not in qvars:
                qvars.append(body.var)
            body = body.body
        inner_env = {k: v for k, v in env.items() if k not in qvars}
        literals = _conjuncts(body, kind is Exists)
        qvars = [v for v in qvars if any(v in lit.free_vars for lit, _ in literals)]
        result = self._contract(literals, qvars, inner_env)
        if kind is ForAll:
            result = Table(result.vars, ~result.data)
        return result

    def _contract(self, literals, qvars: list[str], env) -> Table:
        """The solution set of ``exists qvars. (l1 & l2 & ...)`` for signed literals."""
        opened = [set(self._open(lit, env)) for lit, _ in literals]
        out_vars = set().union(*opened) - set(qvars)
        oversize = [i for i, vs in enumerate(opened) if self._size(len(vs)) > self.cell_cap]
        if oversize or self._size(len(out_vars)) > self.cell_cap:
            return self._split(literals, qvars, env, oversize)
        tables = []
        for lit, positive in literals:
            try:
                t = self.formula(lit, env)
            except TooLarge:
                inside = [v for v in qvars if v in lit.free_vars]
                if not inside:
                    raise
                return self._split(literals, qvars, env, [], prefer=inside[0])
            tables.append(t if positive else Table(t.vars, ~t.data))
        return self._join(tables, qvars)

    def _split(self, literals, qvars, env, oversize, prefer=None) -> Table:
        candidates = list(qvars)
        if prefer is None:
            if not candidates:
                raise TooLarge("cannot split: no quantified variable left to enumerate")
            counts = {v: sum(v in literals[i][0].free_vars for i in oversize) for v in candidates}
            prefer = max(candidates, key=lambda v: (counts[v], -candidates.index(v)))
        rest = [v for v in qvars if v != prefer]
        self.stats["splits"] += 1
        acc: Table | None = None
        for value in range(self.n):
            part = self._contract(literals, rest, {**env, prefer: value})
            if acc is None:
                acc = Table(part.vars, part.data.copy())
            else:
                order, (a, b) = _align([acc, part], self.n)
                acc = Table(order, np.array(np.broadcast_to(a | b, (self.n,) * len(order))))
            if acc.data.all():
                break
        return acc

    def _join(self, tables: list[Table], qvars: list[str]) -> Table:
        self.stats["contractions"] += 1
        all_vars: list[str] = []
        for t in tables:
            for v in t.vars:
                if v not in all_vars:
                    all_vars.append(v)
        out = tuple(v for v in all_vars if v not in qvars)
        if not any(v in qvars for v in all_vars):
            # plain conjunction
            data = np.ones((self.n,) * len(out), dtype=bool)
            for t in tables:
                data = data & _as_order(t, out, self.n)
            return Table(out, data)
        if len(tables) == 1:
            t = tables[0]
            axes = tuple(i for i, v in enumerate(t.vars) if v in qvars)
            return Table(tuple(v for v in t.vars if v not in qvars), t.data.any(axis=axes))
        if any(not t.data.any() for t in tables):
            return Table(out, np.zeros((self.n,) * len(out), dtype=bool))
        letters = {v: string.ascii_letters[i] for i, v in enumerate(all_vars)}
        if len(all_vars) > len(string.ascii_letters):
            raise TooLarge("too many variables in one contraction")
        summed = self._size(len(all_vars) - len(out))
        dtype = np.float32 if summed < (1 << 24) else np.float64
        operands = [t.data.astype(dtype) for t in tables]
        subscripts = ",".join("".join(letters[v] for v in t.vars) for t in tables)
        subscripts += "->" + "".join(letters[v] for v in out)
        counts = np.einsum(subscripts, *operands, optimize=("greedy", self.cell_cap))
        return Table(out, np.asarray(counts) > 0.5)


def _conjuncts(f: Formula, positive: bool) -> list[tuple[Formula, bool]]:
    """Split ``f`` (or its negation) into signed conjuncts."""
    if isinstance(f, Not):
        return _conjuncts(f.body, not positive)
    if positive and isinstance(f, And):
        return _conjuncts(f.left, True) + _conjuncts(f.right, True)
    if not positive and isinstance(f, Or):
        return _conjuncts(f.left, False) + _conjuncts(f.right, False)
    if not positive and isinstance(f, Implies):
        return _conjuncts(f.left, True) + _conjuncts(f.right, False)
    return [(f, positive)]


def evaluate(model: Model, f: Formula, env: dict[str, int] | None = None, order: list[str] | None = None,
             cell_cap: int = DEFAULT_CELL_CAP, cache: bool = True) -> np.ndarray:
    """Boolean array of ``f`` with axes ``order`` (default: sorted open variables)."""
    env = dict(env or {})
    ev = Evaluator(model, cell_cap=cell_cap, cache=cache)
    table = ev.formula(f, env)
    if order is None:
        order = sorted(table.vars)
    missing = set(table.vars) - set(order)
    if missing:
        raise EvaluationError(f"variables {sorted(missing)} are free but not listed")
    if len(set(order)) != len(order):
        raise EvaluationError("repeated variable in the requested order")
    if model.size ** len(order) > cell_cap:
        raise TooLarge(f"solution set over {len(order)} variables exceeds the cell cap")
    return np.array(_as_order(table, tuple(order), model.size))


def model_check(model: Model, sentence: Formula, cell_cap: int = DEFAULT_CELL_CAP, cache: bool = True) -> bool:
    if sentence.free_vars:
        raise EvaluationError(f"not a sentence: free variables {sorted(sentence.free_vars)}")
    return bool(evaluate(model, sentence, cell_cap=cell_cap, cache=cache))
