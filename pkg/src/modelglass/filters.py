"""Filters and ultrafilters on finite bases.

Subsets of the base ``{0..b-1}`` are bit patterns (``int``), bit ``i`` set
when ``i`` is a member. On a finite base every ultrafilter is principal, so
the co-finite convention for ultrafilters on infinite index sets has no
finite counterpart here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

DEFAULT_BASE_CAP = 12


class FilterError(ValueError):
    pass


def to_mask(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << i
    return mask


def to_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _fmt(mask: int) -> str:
    return "{" + ",".join(map(str, sorted(to_set(mask)))) + "}"


@dataclass(frozen=True)
class SetFamily:
    base_size: int
    members: frozenset[int]

    def __post_init__(self):
        if self.base_size < 0:
            raise FilterError("base size must be nonnegative")
        full = self.full
        for m in self.members:
            if m & ~full:
                raise FilterError(f"{_fmt(m)} is not a subset of the base of size {self.base_size}")

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], base_size: int) -> "SetFamily":
        return cls(base_size, frozenset(to_mask(s) for s in sets))

    @property
    def full(self) -> int:
        return (1 << self.base_size) - 1

    def __contains__(self, s) -> bool:
        mask = s if isinstance(s, int) else to_mask(s)
        return mask in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sets(self) -> list[frozenset[int]]:
        return [to_set(m) for m in sorted(self.members, key=lambda m: (bin(m).count("1"), m))]

    def __str__(self) -> str:
        return "{" + ",".join(_fmt(m) for m in sorted(self.members, key=lambda m: (bin(m).count("1"), m))) + "}"


@dataclass(frozen=True)
class FilterCheck:
    ok: bool
    condition: str = ""  # which clause failed: 'nonempty', 'empty set', 'intersection', 'upward'
    witness: tuple[frozenset[int], ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "filter"
        sets = ", ".join("{" + ",".join(map(str, sorted(s))) + "}" for s in self.witness)
        return f"not a filter: {self.condition} fails at {sets}"


def is_filter(fam: SetFamily) -> FilterCheck:
    """Check the three filter clauses; the first failure is returned with its witness.

    The empty family is rejected: a filter contains the base.
    """
    members = fam.members
    if not members:
        return FilterCheck(False, "nonempty", ())
    if 0 in members:
        return FilterCheck(False, "empty set", (frozenset(),))
    ordered = sorted(members)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a & b not in members:
                return FilterCheck(False, "intersection", (to_set(a), to_set(b)))
    for a in ordered:
        for i in range(fam.base_size):
            bigger = a | 1 << i
            if bigger != a and bigger not in members:
                return FilterCheck(False, "upward", (to_set(a), to_set(bigger)))
    return FilterCheck(True)


class Filter(SetFamily):
    """A set family that passed :func:`is_filter`."""

    def __init__(self, base_size: int, members: frozenset[int]):
        super().__init__(base_size, frozenset(members))
        check = is_filter(self)
        if not check:
            raise FilterError(check.describe())

    @classmethod
    def principal(cls, base_size: int, point: int) -> "Filter":
        return cls.generated_by(base_size, 1 << point)

    @classmethod
    def generated_by(cls, base_size: int, core: int, cap: int = 20) -> "Filter":
        """All supersets of ``core``."""
        if core == 0:
            raise FilterError("the empty set generates no filter")
        if base_size > cap:
            raise FilterError(f"base of size {base_size} exceeds the cap of {cap}")
        free = [i for i in range(base_size) if not core >> i & 1]
        members = set()
        for bits in range(1 << len(free)):
            mask = core
            for j, i in enumerate(free):
                if bits >> j & 1:
                    mask |= 1 << i
            members.add(mask)
        return cls(base_size, frozenset(members))

    @property
    def core(self) -> int:
        mask = self.full
        for m in self.members:
            mask &= m
        return mask


def generated_filter(gens: SetFamily, cap: int = 20) -> Filter:
    """The smallest filter containing ``gens``.

    Raises when some finite intersection of generators is empty, naming a
    minimal such subfamily.
    """
    if gens.base_size > cap:
        raise FilterError(f"base of size {gens.base_size} exceeds the cap of {cap}")
    core = gens.full
    ordered = sorted(gens.members, key=lambda m: (bin(m).count("1"), m))
    used = []
    for m in ordered:
        core &= m
        used.append(m)
        if core == 0:
            raise FilterError(
                "generators lack the finite intersection property: "
                + " & ".join(_fmt(s) for s in _minimal_empty(used))
                + " = {}"
            )
    return Filter.generated_by(gens.base_size, core, cap)


def _minimal_empty(sets: list[int]) -> list[int]:
    full = -1
    keep = list(sets)
    for s in list(keep):
        rest = [t for t in keep if t != s]
        acc = full
        for t in rest:
            acc &= t
        if rest and acc == 0:
            keep = rest
    return keep


def limit_points(f: SetFamily) -> frozenset[int]:
    """Elements lying in every member."""
    mask = f.full
    for m in f.members:
        mask &= m
    return to_set(mask)


def is_ultrafilter(f: SetFamily, cap: int = 20) -> bool:
    if not is_filter(f):
        return False
    if f.base_size > cap:
        raise FilterError(f"base of size {f.base_size} exceeds the cap of {cap}")
    full = f.full
    return all((a in f.members) != (full & ~a in f.members) for a in range(1 << f.base_size))


def enumerate_ultrafilters(base_size: int, cap: int = DEFAULT_BASE_CAP) -> list[Filter]:
    """Every ultrafilter on ``{0..base_size-1}``: the principal ones."""
    if base_size > cap:
        raise FilterError(f"base of size {base_size} exceeds the cap of {cap}")
    return [Filter.principal(base_size, i) for i in range(base_size)]


def principal_point(f: SetFamily) -> int:
    points = limit_points(f)
    if len(points) != 1 or not is_ultrafilter(f):
        raise FilterError("not an ultrafilter")
    return next(iter(points))


_FAMILY = re.compile(r"^\s*\{(?P<body>.*)\}\s*over\s+(?P<n>\d+)\s*$", re.S)


def parse_family(text: str) -> SetFamily:
    """Read brace notation such as ``{{2,3},{3,4}} over 5``."""
    m = _FAMILY.match(text)
    if not m:
        raise FilterError("expected '{{...},{...}} over N'")
    body = m.group("body").strip()
    sets = []
    pos = 0
    while pos < len(body):
        if body[pos] in " ,\t\n":
            pos += 1
            continue
        if body[pos] != "{":
            raise FilterError(f"expected '{{' at offset {pos} of the family body")
        end = body.find("}", pos)
        if end < 0:
            raise FilterError("unbalanced brace")
        inner = body[pos + 1:end].strip()
        try:
            sets.append([int(x) for x in inner.split(",")] if inner else [])
        except ValueError:
            raise FilterError(f"bad set {{{inner}}}") from None
        pos = end + 1
    return SetFamily.of(sets, int(m.group("n")))
