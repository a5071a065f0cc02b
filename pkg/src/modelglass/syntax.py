"""First-order syntax: signatures, terms, formulas, the concrete grammar.

Grammar summary (ASCII)::

    formula  := iff
    iff      := imp ('<->' imp)*
    imp      := or ('->' imp)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | ('forall' | 'exists') VAR '.' formula
              | '(' formula ')' | atom
    atom     := term REL term | REL '(' term, ... ')'

Quantifiers take maximal scope, i.e. they extend to the end of the enclosing
parenthesized group. Terms use declared infix function symbols with ``*``
binding tighter than everything else. Integer literals that are not declared
constants denote model elements (parameters).
"""

from __future__ import annotations

import itertools
import math
import re
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

EQ = "="
KEYWORDS = frozenset({"forall", "exists", "rel", "fun", "const"})
CONNECTIVES = ("<->", "->", "!", "&", "|")
PUNCT = ("(", ")", ",", ".")
TIGHT_INFIX = frozenset({"*", "×", "/", "·"})

_WORD = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")
_VARIABLE = re.compile(r"[A-Za-z][A-Za-z0-9']*\Z")
_SPACE = re.compile(r"\s+")


class SyntaxError_(ValueError):
    """Malformed signature or formula text, with a 1-based position."""

    def __init__(self, message: str, text: str = "", offset: int | None = None):
        self.offset = offset
        self.line = self.column = None
        if offset is not None:
            self.line = text.count("\n", 0, offset) + 1
            self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
            message = f"{message} (line {self.line}, column {self.column})"
        super().__init__(message)


ParseError = SyntaxError_


class SignatureError(ValueError):
    pass


class ShadowingWarning(UserWarning):
    """A quantifier rebinds a variable that is already bound."""


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    infix: bool = False


@dataclass(frozen=True)
class Signature:
    relations: tuple[Symbol, ...] = ()
    functions: tuple[Symbol, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        rels = list(self.relations)
        if not any(r.name == EQ for r in rels):
            rels.insert(0, Symbol(EQ, 2, True))
            object.__setattr__(self, "relations", tuple(rels))
        names = [s.name for s in self.relations] + [s.name for s in self.functions] + list(self.constants)
        seen = set()
        for name in names:
            if name in seen:
                raise SignatureError(f"duplicate symbol {name!r}")
            seen.add(name)
        for sym in self.relations + self.functions:
            if sym.arity < 1:
                raise SignatureError(f"symbol {sym.name!r} needs arity >= 1")
            if sym.infix and sym.arity != 2:
                raise SignatureError(f"infix symbol {sym.name!r} must have arity 2")
        eq = self.relation(EQ)
        if eq.arity != 2 or not eq.infix:
            raise SignatureError("'=' is reserved as binary infix equality")

    @cached_property
    def _rel(self) -> dict[str, Symbol]:
        return {s.name: s for s in self.relations}

    @cached_property
    def _fun(self) -> dict[str, Symbol]:
        return {s.name: s for s in self.functions}

    def relation(self, name: str) -> Symbol:
        return self._rel[name]

    def function(self, name: str) -> Symbol:
        return self._fun[name]

    def is_relation(self, name: str) -> bool:
        return name in self._rel

    def is_function(self, name: str) -> bool:
        return name in self._fun

    def is_constant(self, name: str) -> bool:
        return name in self.constants

    @cached_property
    def symbols(self) -> frozenset[str]:
        return frozenset(self._rel) | frozenset(self._fun) | frozenset(self.constants)

    def __str__(self) -> str:
        parts = []
        for kind, syms in (("rel", self.relations), ("fun", self.functions)):
            for s in syms:
                if kind == "rel" and s.name == EQ:
                    continue
                parts.append(f"{kind} {s.name} /{s.arity}" + (" infix" if s.infix else ""))
        parts.extend(f"const {c}" for c in self.constants)
        return "; ".join(parts)


def parse_signature(text: str) -> Signature:
    """Parse ``rel NAME /ARITY [infix]; fun ...; const NAME`` statements.

    Statements are separated by ``;`` or newlines; ``#`` starts a comment.
    """
    relations: list[Symbol] = []
    functions: list[Symbol] = []
    constants: list[str] = []
    seen: dict[str, int] = {EQ: -1}
    pos = 0
    blanked = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    for stmt in re.split(r"[;\n]", blanked):
        start = pos
        pos += len(stmt) + 1
        if not stmt.strip():
            continue
        offset = start + len(stmt) - len(stmt.lstrip())
        words = stmt.split()
        kind = words[0]
        if kind == "const":
            if len(words) != 2:
                raise ParseError("expected 'const NAME'", text, offset)
            name = words[1]
            _check_name(name, text, offset)
            if name in seen:
                raise ParseError(f"duplicate symbol {name!r}", text, offset)
            seen[name] = offset
            constants.append(name)
            continue
        if kind not in ("rel", "fun"):
            raise ParseError(f"unknown statement {kind!r}", text, offset)
        m = re.fullmatch(r"\s*(rel|fun)\s+(\S+?)\s*/\s*(\d+)\s*(infix)?\s*", stmt)
        if not m:
            raise ParseError(f"expected '{kind} NAME /ARITY [infix]'", text, offset)
        name, arity, infix = m.group(2), int(m.group(3)), bool(m.group(4))
        _check_name(name, text, offset)
        if name in seen:
            what = "'=' is built in and cannot be redeclared" if name == EQ else f"duplicate symbol {name!r}"
            raise ParseError(what, text, offset)
        if arity < 1:
            raise ParseError(f"arity of {name!r} must be >= 1", text, offset)
        if infix and arity != 2:
            raise ParseError(f"infix symbol {name!r} must have arity 2", text, offset)
        seen[name] = offset
        (relations if kind == "rel" else functions).append(Symbol(name, arity, infix))
    return Signature(tuple(relations), tuple(functions), tuple(constants))


def _check_name(name: str, text: str, offset: int) -> None:
    if name in KEYWORDS or any(c in name for c in "(),;/#") or name in CONNECTIVES or name == ".":
        raise ParseError(f"illegal symbol name {name!r}", text, offset)


EMPTY_SIGNATURE = Signature()
RING_SIGNATURE = parse_signature("fun + /2 infix; fun * /2 infix; const 0; const 1")
ORDERED_RING_SIGNATURE = parse_signature(
    "rel < /2 infix; fun + /2 infix; fun * /2 infix; fun - /2 infix; const 0; const 1"
)
ORDER_SIGNATURE = parse_signature("rel < /2 infix")
GRAPH_SIGNATURE = parse_signature("rel E /2")


# ---------------------------------------------------------------------------
# Abstract syntax


class Node:
    __slots__ = ()

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))

    def __str__(self) -> str:
        return to_text(self)


class Term(Node):
    pass


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset((self.name,))

    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: str
    free_vars = frozenset()
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Param(Term):
    """A named model element used as a parameter."""

    value: int
    free_vars = frozenset()
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class App(Term):
    fn: str
    args: tuple[Term, ...]

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset().union(*(a.free_vars for a in self.args))

    __hash__ = Node.__hash__


class Formula(Node):
    pass


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset().union(*(a.free_vars for a in self.args))

    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Not(Formula):
    body: Formula

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.body.free_vars

    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Binary(Formula):
    left: Formula
    right: Formula
    op = ""

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.left.free_vars | self.right.free_vars

    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class And(Binary):
    op = "&"
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Or(Binary):
    op = "|"
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Implies(Binary):
    op = "->"
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Iff(Binary):
    op = "<->"
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Quantifier(Formula):
    var: str
    body: Formula
    keyword = ""

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.body.free_vars - {self.var}

    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class ForAll(Quantifier):
    keyword = "forall"
    __hash__ = Node.__hash__


@dataclass(frozen=True, eq=True)
class Exists(Quantifier):
    keyword = "exists"
    __hash__ = Node.__hash__


BINARY_OPS = {"&": And, "|": Or, "->": Implies, "<->": Iff}


def eq(a: Term, b: Term) -> Atom:
    return Atom(EQ, (a, b))


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def forall(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = ForAll(name, body)
    return body


def exists(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


# ---------------------------------------------------------------------------
# Syntactic functions


def free_variables(node: Node) -> frozenset[str]:
    return node.free_vars


def is_sentence(f: Formula) -> bool:
    return not f.free_vars


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, Binary):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def subterms(node: Node) -> Iterator[Node]:
    """Pre-order walk over every subformula and subterm."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, (App, Atom)):
            stack.extend(reversed(n.args))
        elif isinstance(n, (Not, Quantifier)):
            stack.append(n.body)
        elif isinstance(n, Binary):
            stack.extend((n.right, n.left))


def parameters(node: Node) -> frozenset[int]:
    return frozenset(n.value for n in subterms(node) if isinstance(n, Param))


def variables(node: Node) -> frozenset[str]:
    """Every variable name occurring free or bound."""
    out = set()
    for n in subterms(node):
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, Quantifier):
            out.add(n.var)
    return frozenset(out)


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def substitute(node, var: str, term: Term):
    """Capture-avoiding substitution of ``term`` for free ``var``."""
    if var not in node.free_vars:
        return node
    if isinstance(node, Var):
        return term
    if isinstance(node, App):
        return App(node.fn, tuple(substitute(a, var, term) for a in node.args))
    if isinstance(node, Atom):
        return Atom(node.rel, tuple(substitute(a, var, term) for a in node.args))
    if isinstance(node, Not):
        return Not(substitute(node.body, var, term))
    if isinstance(node, Binary):
        return type(node)(substitute(node.left, var, term), substitute(node.right, var, term))
    # quantifier; var is free in body and differs from node.var
    bound, body = node.var, node.body
    if bound in term.free_vars:
        new = fresh_name(bound, body.free_vars | term.free_vars | {var})
        body = substitute(body, bound, Var(new))
        bound = new
    return type(node)(bound, substitute(body, var, term))


def bind(node, values: dict[str, int]):
    """Replace free variables by parameter terms naming model elements."""
    for name, value in values.items():
        node = substitute(node, name, Param(value))
    return node


# ---------------------------------------------------------------------------
# Printing


def to_text(node: Node, sig: Signature | None = None) -> str:
    if isinstance(node, Term):
        return _term_text(node, sig)
    return _formula_text(node, sig)


def _is_infix(name: str, sig: Signature | None, relation: bool) -> bool:
    if sig is None:
        return name == EQ or not _WORD.fullmatch(name)
    sym = sig.relation(name) if relation else sig.function(name)
    return sym.infix


def _term_text(t: Term, sig) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Param):
        return str(t.value)
    if len(t.args) == 2 and _is_infix(t.fn, sig, False):
        return f"({_term_text(t.args[0], sig)} {t.fn} {_term_text(t.args[1], sig)})"
    return f"{t.fn}(" + ", ".join(_term_text(a, sig) for a in t.args) + ")"


def _formula_text(f: Formula, sig) -> str:
    if isinstance(f, Atom):
        if len(f.args) == 2 and _is_infix(f.rel, sig, True):
            return f"({_term_text(f.args[0], sig)} {f.rel} {_term_text(f.args[1], sig)})"
        return f"{f.rel}(" + ", ".join(_term_text(a, sig) for a in f.args) + ")"
    if isinstance(f, Not):
        return "!" + _operand(f.body, sig)
    if isinstance(f, Binary):
        return f"({_operand(f.left, sig)} {f.op} {_formula_text(f.right, sig)})"
    return f"{f.keyword} {f.var}. {_formula_text(f.body, sig)}"


def _operand(f: Formula, sig) -> str:
    text = _formula_text(f, sig)
    return f"({text})" if isinstance(f, Quantifier) else text


def print_formula(f: Formula, sig: Signature | None = None) -> str:
    """Canonical text: every connective and infix application parenthesized."""
    return _formula_text(f, sig)


# ---------------------------------------------------------------------------
# Parsing


@dataclass(frozen=True)
class Token:
    kind: str  # 'word', 'sym', 'punct', 'conn', 'eof'
    text: str
    offset: int


def tokenize(text: str, sig: Signature) -> list[Token]:
    symbolic = sorted(
        {n for n in sig.symbols if not _WORD.fullmatch(n)} | set(CONNECTIVES) | set(PUNCT),
        key=len,
        reverse=True,
    )
    tokens = []
    i = 0
    while i < len(text):
        m = _SPACE.match(text, i)
        if m:
            i = m.end()
            continue
        m = _WORD.match(text, i)
        if m:
            tokens.append(Token("word", m.group(), i))
            i = m.end()
            continue
        for s in symbolic:
            if text.startswith(s, i):
                kind = "conn" if s in CONNECTIVES else "punct" if s in PUNCT else "sym"
                tokens.append(Token(kind, s, i))
                i += len(s)
                break
        else:
            raise ParseError(f"unknown symbol {text[i]!r}", text, i)
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = tokenize(text, sig)
        self.i = 0
        self.bound: list[str] = []
        self._group_memo: dict[int, bool] = {}

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, self.text, tok.offset)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "word" and text in PUNCT:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind != "word" and self.tok.text == text or (
            self.tok.kind == "word" and text in KEYWORDS and self.tok.text == text
        )

    # formulas
    def formula(self) -> Formula:
        left = self.implication()
        while self.at("<->"):
            self.i += 1
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if tok.kind == "word" and tok.text in ("forall", "exists"):
            self.i += 1
            var = self.tok
            if var.kind != "word" or not _VARIABLE.match(var.text) or var.text in KEYWORDS:
                raise self.error("expected a variable after quantifier")
            if var.text in self.sig.symbols:
                raise self.error(f"cannot quantify over symbol {var.text!r}")
            if var.text in self.bound:
                warnings.warn(
                    f"variable {var.text!r} shadows an enclosing binding (offset {var.offset})",
                    ShadowingWarning,
                    stacklevel=4,
                )
            self.i += 1
            self.expect(".")
            self.bound.append(var.text)
            body = self.formula()
            self.bound.pop()
            cls = ForAll if tok.text == "forall" else Exists
            return cls(var.text, body)
        if self.at("(") and self.group_is_formula(self.i):
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def group_is_formula(self, start: int) -> bool:
        if start in self._group_memo:
            return self._group_memo[start]
        depth = 0
        result = False
        j = start
        prev = None
        while True:
            tok = self.toks[j]
            if tok.kind == "eof":
                raise ParseError("unbalanced parenthesis", self.text, self.toks[start].offset)
            if tok.kind == "punct" and tok.text == "(":
                depth += 1
                if depth == 2 and not result and not self._is_application(prev):
                    if self.group_is_formula(j):
                        result = True
            elif tok.kind == "punct" and tok.text == ")":
                depth -= 1
                if depth == 0:
                    break
            elif depth == 1 and not result:
                if tok.kind == "conn" or tok.text in ("forall", "exists") and tok.kind == "word":
                    result = True
                elif tok.kind in ("word", "sym") and self.sig.is_relation(tok.text):
                    result = True
            prev = tok
            j += 1
        self._group_memo[start] = result
        return result

    def _is_application(self, prev: Token | None) -> bool:
        return prev is not None and prev.kind in ("word", "sym") and (
            self.sig.is_function(prev.text) or self.sig.is_relation(prev.text)
        )

    def atom(self) -> Formula:
        tok = self.tok
        if tok.kind in ("word", "sym") and self.sig.is_relation(tok.text):
            nxt = self.toks[self.i + 1]
            if nxt.kind == "punct" and nxt.text == "(":
                self.i += 1
                args = self.arguments(self.sig.relation(tok.text), tok)
                return Atom(tok.text, args)
        left = self.term()
        tok = self.tok
        if tok.kind in ("word", "sym") and self.sig.is_relation(tok.text):
            sym = self.sig.relation(tok.text)
            if sym.arity != 2:
                raise self.error(f"relation {sym.name!r} has arity {sym.arity}, used infix")
            self.i += 1
            right = self.term()
            return Atom(sym.name, (left, right))
        found = tok.text or "end of input"
        raise self.error(f"expected a relation symbol, found {found!r}")

    # terms
    def term(self, tight: bool = False) -> Term:
        left = self.product() if not tight else self.primary()
        while True:
            tok = self.tok
            if tok.kind in ("word", "sym") and self.sig.is_function(tok.text):
                sym = self.sig.function(tok.text)
                if not sym.infix:
                    raise self.error(f"function {sym.name!r} is not infix")
                if sym.name in TIGHT_INFIX:
                    raise self.error("internal precedence error")
                self.i += 1
                left = App(sym.name, (left, self.product()))
            else:
                return left

    def product(self) -> Term:
        left = self.primary()
        while self.tok.kind in ("word", "sym") and self.tok.text in TIGHT_INFIX and self.sig.is_function(self.tok.text):
            sym = self.sig.function(self.tok.text)
            if not sym.infix:
                raise self.error(f"function {sym.name!r} is not infix")
            self.i += 1
            left = App(sym.name, (left, self.primary()))
        return left

    def primary(self) -> Term:
        tok = self.tok
        if tok.kind == "punct" and tok.text == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if tok.kind in ("word", "sym") and self.sig.is_function(tok.text):
            self.i += 1
            if not (self.tok.kind == "punct" and self.tok.text == "("):
                raise self.error(f"function {tok.text!r} needs arguments")
            return App(tok.text, self.arguments(self.sig.function(tok.text), tok))
        if tok.kind in ("word", "sym") and self.sig.is_constant(tok.text):
            self.i += 1
            return Const(tok.text)
        if tok.kind == "word" and tok.text not in KEYWORDS and not self.sig.is_relation(tok.text):
            if tok.text.isdigit():
                self.i += 1
                return Param(int(tok.text))
            if _VARIABLE.match(tok.text):
                nxt = self.toks[self.i + 1]
                if nxt.kind == "punct" and nxt.text == "(":
                    raise self.error(f"unknown symbol {tok.text!r}")
                self.i += 1
                return Var(tok.text)
            raise self.error(f"unknown symbol {tok.text!r}")
        found = tok.text or "end of input"
        if tok.kind == "sym" or tok.kind == "word" and self.sig.is_relation(tok.text):
            raise self.error(f"unexpected symbol {found!r} in term")
        raise self.error(f"expected a term, found {found!r}")

    def arguments(self, sym: Symbol, tok: Token) -> tuple[Term, ...]:
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.i += 1
            args.append(self.term())
        self.expect(")")
        if len(args) != sym.arity:
            raise self.error(f"arity mismatch: {sym.name!r} takes {sym.arity}, got {len(args)}", tok)
        return tuple(args)


def parse_formula(text: str, sig: Signature = EMPTY_SIGNATURE) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    if p.tok.kind != "eof":
        if p.tok.text == ")":
            raise p.error("unbalanced parenthesis")
        raise p.error(f"unexpected {p.tok.text!r}")
    return f


def parse_term(text: str, sig: Signature = EMPTY_SIGNATURE) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


# ---------------------------------------------------------------------------
# Ax sentences


MAX_AX_COEFFICIENTS = 64


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree <= k in graded lexicographic order, highest degree first."""
    out = [e for e in itertools.product(range(k + 1), repeat=n) if sum(e) <= k]
    out.sort(key=lambda e: (-sum(e), tuple(-x for x in e)))
    return out


def ax_coefficient_count(n: int, k: int) -> int:
    return n * math.comb(n + k, k)


def _polynomial(coeffs: list[str], exps: list[tuple[int, ...]], xs: list[str]) -> Term:
    total = None
    for c, e in zip(coeffs, exps):
        t: Term = Var(c)
        for var, power in zip(xs, e):
            for _ in range(power):
                t = App("*", (t, Var(var)))
        total = t if total is None else App("+", (total, t))
    return total


def build_ax_sentence(n: int, k: int, max_coefficients: int = MAX_AX_COEFFICIENTS) -> Formula:
    """The ring sentence saying injective polynomial maps of degree <= k on n-space are surjective.

    Coefficients ``a1, a2, ...`` are universally quantified in monomial order,
    polynomial p1 first; the map variables are ``x1..xn`` with ``y1..yn`` as the
    second injectivity argument and ``z1..zn`` as the surjectivity target.
    """
    if n < 1 or k < 1:
        raise ValueError("build_ax_sentence needs n >= 1 and k >= 1")
    count = ax_coefficient_count(n, k)
    if count > max_coefficients:
        raise ValueError(f"phi_{n},{k} has {count} coefficients, above the cap of {max_coefficients}")
    exps = monomials(n, k)
    names = [f"a{i + 1}" for i in range(count)]
    blocks = [names[i * len(exps):(i + 1) * len(exps)] for i in range(n)]
    xs = [f"x{i + 1}" for i in range(n)]
    ys = [f"y{i + 1}" for i in range(n)]
    zs = [f"z{i + 1}" for i in range(n)]
    px = [_polynomial(b, exps, xs) for b in blocks]
    py = [_polynomial(b, exps, ys) for b in blocks]
    injective = forall(
        xs + ys,
        Implies(conj(eq(p, q) for p, q in zip(px, py)), conj(eq(Var(x), Var(y)) for x, y in zip(xs, ys))),
    )
    surjective = forall(zs, exists(xs, conj(eq(p, Var(z)) for p, z in zip(px, zs))))
    return forall(names, Implies(injective, surjective))
