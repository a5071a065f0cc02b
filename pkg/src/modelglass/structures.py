"""Finite structures and their text format.

Elements are the integers ``0..n-1``. Relations are stored as dense boolean
tables and functions as dense integer tables, one axis per argument; equality
is never stored.

Model file format::

    model 5
    fun +: (0,0)->0 (0,1)->1 ...
    rel <: (0,1) (0,2) ...
    const 0 = 0
"""

from __future__ import annotations

import itertools
import os
import re
from typing import Iterable, Mapping

import numpy as np

from .syntax import EQ, GRAPH_SIGNATURE, ORDER_SIGNATURE, RING_SIGNATURE, Signature, parse_signature


class ModelError(ValueError):
    pass


class Model:
    """An immutable finite structure over ``sig`` with domain ``range(size)``."""

    def __init__(
        self,
        sig: Signature,
        size: int,
        relations: Mapping[str, Iterable[tuple[int, ...]] | np.ndarray] | None = None,
        functions: Mapping[str, Mapping[tuple[int, ...], int] | np.ndarray] | None = None,
        constants: Mapping[str, int] | None = None,
    ):
        if size < 1:
            raise ModelError("the domain of a model must be nonempty")
        self.sig = sig
        self.size = size
        relations = dict(relations or {})
        functions = dict(functions or {})
        constants = dict(constants or {})
        self._rel: dict[str, np.ndarray] = {}
        self._fun: dict[str, np.ndarray] = {}
        self.constants: dict[str, int] = {}

        for name in list(relations) + list(functions) + list(constants):
            if name == EQ:
                raise ModelError("'=' is interpreted as equality and cannot be given a table")
            if name not in sig.symbols:
                raise ModelError(f"unknown symbol {name!r}")
        for sym in sig.relations:
            if sym.name == EQ:
                continue
            table = np.zeros((size,) * sym.arity, dtype=bool)
            given = relations.get(sym.name, ())
            if isinstance(given, np.ndarray):
                if given.shape != table.shape:
                    raise ModelError(f"relation {sym.name!r} table has shape {given.shape}")
                table[...] = given
            else:
                for tup in given:
                    tup = tuple(tup)
                    self._check_tuple(sym.name, tup, sym.arity)
                    table[tup] = True
            table.flags.writeable = False
            self._rel[sym.name] = table
        for sym in sig.functions:
            given = functions.get(sym.name)
            if given is None:
                raise ModelError(f"missing function value: {sym.name!r} is not interpreted")
            if isinstance(given, np.ndarray):
                table = np.array(given, dtype=np.int64)
                if table.shape != (size,) * sym.arity:
                    raise ModelError(f"function {sym.name!r} table has shape {table.shape}")
                if table.min() < 0 or table.max() >= size:
                    raise ModelError(f"function {sym.name!r}: value out of range")
            else:
                table = np.full((size,) * sym.arity, -1, dtype=np.int64)
                for args, value in given.items():
                    args = tuple(args)
                    self._check_tuple(sym.name, args, sym.arity)
                    if not 0 <= value < size:
                        raise ModelError(f"function {sym.name!r}: value {value} out of range")
                    table[args] = value
                if (table < 0).any():
                    missing = tuple(int(i) for i in np.argwhere(table < 0)[0])
                    raise ModelError(f"missing function value: {sym.name}{missing}")
            table.flags.writeable = False
            self._fun[sym.name] = table
        for name in sig.constants:
            if name not in constants:
                raise ModelError(f"missing constant {name!r}")
            value = constants[name]
            if not 0 <= value < size:
                raise ModelError(f"constant {name!r} = {value} out of range")
            self.constants[name] = value

    def _check_tuple(self, name, tup, arity):
        if len(tup) != arity:
            raise ModelError(f"{name!r} expects {arity}-tuples, got {tup}")
        if any(not 0 <= x < self.size for x in tup):
            raise ModelError(f"tuple out of range for {name!r}: {tup}")

    def relation_table(self, name: str) -> np.ndarray:
        return self._rel[name]

    def function_table(self, name: str) -> np.ndarray:
        return self._fun[name]

    def holds(self, name: str, args: tuple[int, ...]) -> bool:
        if name == EQ:
            return args[0] == args[1]
        return bool(self._rel[name][args])

    def apply(self, name: str, args: tuple[int, ...]) -> int:
        return int(self._fun[name][args])

    def tuples(self, name: str) -> set[tuple[int, ...]]:
        if name == EQ:
            return {(i, i) for i in range(self.size)}
        return {tuple(int(x) for x in t) for t in np.argwhere(self._rel[name])}

    @property
    def domain(self) -> range:
        return range(self.size)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (
            self.sig == other.sig
            and self.size == other.size
            and self.constants == other.constants
            and all(np.array_equal(self._rel[k], other._rel[k]) for k in self._rel)
            and all(np.array_equal(self._fun[k], other._fun[k]) for k in self._fun)
        )

    __hash__ = None

    def __repr__(self):
        return f"Model(size={self.size}, sig='{self.sig}')"

    def relabel(self, perm: list[int]) -> "Model":
        """The isomorphic copy in which element ``i`` is renamed ``perm[i]``."""
        perm_arr = np.asarray(perm)
        rels = {k: {tuple(int(perm_arr[x]) for x in t) for t in self.tuples(k)} for k in self._rel}
        funs = {}
        for k, table in self._fun.items():
            funs[k] = {
                tuple(int(perm_arr[x]) for x in args): int(perm_arr[table[args]])
                for args in itertools.product(range(self.size), repeat=table.ndim)
            }
        consts = {k: int(perm_arr[v]) for k, v in self.constants.items()}
        return Model(self.sig, self.size, rels, funs, consts)


# ---------------------------------------------------------------------------
# Text format

_MODEL_TOKEN = re.compile(r"\s*(->|[(),:]|[^\s(),:]+)")


def _model_tokens(text: str):
    text = re.sub(r"#[^\n]*", "", text)
    pos = 0
    out = []
    while True:
        m = _MODEL_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ModelError(f"cannot read model text at offset {pos}")
            return out
        out.append(m.group(1))
        pos = m.end()


def load_model(text: str, sig: Signature) -> Model:
    toks = _model_tokens(text)
    i = 0

    def take():
        nonlocal i
        if i >= len(toks):
            raise ModelError("unexpected end of model text")
        i += 1
        return toks[i - 1]

    def integer(tok):
        if not tok.isdigit():
            raise ModelError(f"expected an element, found {tok!r}")
        return int(tok)

    def tuple_():
        if take() != "(":
            raise ModelError("expected '('")
        vals = [integer(take())]
        while True:
            tok = take()
            if tok == ")":
                return tuple(vals)
            if tok != ",":
                raise ModelError(f"expected ',' or ')', found {tok!r}")
            vals.append(integer(take()))

    if take() != "model":
        raise ModelError("model text must start with 'model SIZE'")
    size = integer(take())
    relations: dict[str, set] = {}
    functions: dict[str, dict] = {}
    constants: dict[str, int] = {}
    while i < len(toks):
        kind = take()
        if kind == "const":
            name = take()
            if take() != "=":
                raise ModelError(f"expected '=' after const {name}")
            if name in constants:
                raise ModelError(f"constant redefinition: {name!r}")
            constants[name] = integer(take())
            continue
        if kind not in ("rel", "fun"):
            raise ModelError(f"unknown statement {kind!r}")
        name = take()
        if take() != ":":
            raise ModelError(f"expected ':' after {kind} {name}")
        if kind == "rel":
            if not sig.is_relation(name) or name == EQ:
                raise ModelError(f"unknown symbol {name!r}")
            entries = relations.setdefault(name, set())
            while i < len(toks) and toks[i] == "(":
                entries.add(tuple_())
        else:
            if not sig.is_function(name):
                raise ModelError(f"unknown symbol {name!r}")
            table = functions.setdefault(name, {})
            while i < len(toks) and toks[i] == "(":
                args = tuple_()
                if take() != "->":
                    raise ModelError("expected '->' in function entry")
                value = integer(take())
                if args in table:
                    raise ModelError(f"function redefinition: {name}{args}")
                table[args] = value
    return Model(sig, size, relations, functions, constants)


def dump_model(m: Model) -> str:
    lines = [f"model {m.size}"]
    for sym in m.sig.relations:
        if sym.name == EQ:
            continue
        entries = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(m.tuples(sym.name)))
        lines.append(f"rel {sym.name}: {entries}".rstrip())
    for sym in m.sig.functions:
        table = m.function_table(sym.name)
        entries = " ".join(
            "(" + ",".join(map(str, args)) + f")->{table[args]}"
            for args in itertools.product(range(m.size), repeat=sym.arity)
        )
        lines.append(f"fun {sym.name}: {entries}")
    for name in m.sig.constants:
        lines.append(f"const {name} = {m.constants[name]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Standard structures


def cyclic_ring(p: int, sig: Signature = RING_SIGNATURE) -> Model:
    """Z/pZ; the prime field F_p when p is prime.

    Interprets whichever of ``+ * - 0 1 <`` the signature declares (``<`` as the
    order of representatives).
    """
    ops = {"+": lambda a, b: (a + b) % p, "*": lambda a, b: (a * b) % p, "-": lambda a, b: (a - b) % p}
    funcs = {}
    for sym in sig.functions:
        if sym.name not in ops or sym.arity != 2:
            raise ModelError(f"no standard interpretation for {sym.name!r}")
        grid = np.arange(p)
        funcs[sym.name] = ops[sym.name](grid[:, None], grid[None, :])
    rels = {}
    for sym in sig.relations:
        if sym.name == "<":
            rels["<"] = np.arange(p)[:, None] < np.arange(p)[None, :]
        elif sym.name != EQ:
            raise ModelError(f"no standard interpretation for {sym.name!r}")
    consts = {}
    for c in sig.constants:
        if c not in ("0", "1"):
            raise ModelError(f"no standard interpretation for constant {c!r}")
        consts[c] = int(c) % p
    return Model(sig, p, rels, funcs, consts)


def chain(n: int, sig: Signature = ORDER_SIGNATURE) -> Model:
    """The linear order 0 < 1 < ... < n-1."""
    grid = np.arange(n)
    return Model(sig, n, {"<": grid[:, None] < grid[None, :]})


def graph_model(n: int, edges: Iterable[tuple[int, int]], sig: Signature = GRAPH_SIGNATURE) -> Model:
    """Symmetric irreflexive ``E`` on ``n`` vertices."""
    tuples = set()
    for u, v in edges:
        if u == v:
            raise ModelError(f"loop at vertex {u}")
        tuples.add((u, v))
        tuples.add((v, u))
    return Model(sig, n, {"E": tuples})


def read_signature_arg(value: str) -> Signature:
    """A signature given inline or as a path to a signature file."""
    if os.path.exists(value):
        with open(value, encoding="utf-8") as fh:
            return parse_signature(fh.read())
    return parse_signature(value)
