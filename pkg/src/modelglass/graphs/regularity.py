"""Edge densities, epsilon-regular pairs, and regular partitions of stable graphs.

All densities and deviations are exact ``Fraction``s. A pair (X, Y) is
eps-regular when every X' of X and Y' of Y with |X'| >= eps|X| and
|Y'| >= eps|Y| has |d(X', Y') - d(X, Y)| <= eps.

The exact check enumerates subsets of the smaller side only: for a fixed X'
and a fixed size s, the extreme densities over |Y'| = s come from the s
vertices of Y with the most (fewest) neighbors in X'.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Graph, bits, mask_of
from .halfgraph import HalfGraphWitness, find_half_graph

DEFAULT_EXACT_CAP = 12
DEFAULT_TRIALS = 10_000
DEFAULT_BASE = 2


class RegularityError(ValueError):
    pass


class NotStable(RegularityError):
    def __init__(self, k: int, witness: HalfGraphWitness):
        super().__init__(f"graph contains a half-graph of height {k} ({witness}); "
                         "use a general-purpose partitioner instead")
        self.k = k
        self.witness = witness


def as_fraction(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise RegularityError("eps must lie in (0, 1]")
    return eps


def _sides(g: Graph, x: Iterable[int], y: Iterable[int]) -> tuple[list[int], list[int]]:
    xs, ys = sorted(set(x)), sorted(set(y))
    if not xs or not ys:
        raise RegularityError("both sides must be nonempty")
    if set(xs) & set(ys):
        raise RegularityError("the sides must be disjoint")
    if xs[-1] >= g.n or ys[-1] >= g.n or xs[0] < 0 or ys[0] < 0:
        raise RegularityError("vertex out of range")
    return xs, ys


def edge_density(g: Graph, x: Iterable[int], y: Iterable[int]) -> Fraction:
    xs, ys = _sides(g, x, y)
    ymask = mask_of(ys)
    edges = sum((g.adj[v] & ymask).bit_count() for v in xs)
    return Fraction(edges, len(xs) * len(ys))


def _threshold(eps: Fraction, size: int) -> int:
    return max(1, math.ceil(eps * size))


@dataclass
class PairVerdict:
    regular: bool
    density: Fraction
    eps: Fraction
    method: str  # 'homogeneous', 'exact', 'sampled'
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    deviation: Fraction | None = None
    trials: int = 0
    seed: int | None = None
    transcript: list = field(default_factory=list, repr=False)

    def describe(self) -> str:
        if self.regular:
            extra = f", no violation in {self.trials} trials (seed {self.seed})" if self.method == "sampled" else ""
            return f"regular ({self.method}{extra})"
        xs, ys = self.witness
        return (f"irregular: X'={{{','.join(map(str, xs))}}} Y'={{{','.join(map(str, ys))}}} "
                f"deviation {self.deviation} > {self.eps}")


def _extremes(g: Graph, xmask: int, xsize: int, ys: list[int], d0: Fraction, sy: int):
    """The worst Y' of each admissible size for a fixed X'."""
    degs = sorted(((g.adj[y] & xmask).bit_count(), y) for y in ys)
    asc = [d for d, _ in degs]
    num, den = d0.numerator, d0.denominator
    # deviation at size s is |total*den - num*xsize*s| / (xsize*s*den); track it as a pair of ints
    best_top, best_bottom, best_pick = -1, 1, None
    low = high = 0
    for s in range(1, len(ys) + 1):
        low += asc[s - 1]
        high += asc[-s]
        if s < sy:
            continue
        bottom = xsize * s * den
        for total, pick in ((high, 1), (low, -1)):
            top = abs(total * den - num * xsize * s)
            if top * best_bottom > best_top * bottom:
                best_top, best_bottom, best_pick = top, bottom, (pick, s)
    pick, s = best_pick
    chosen = degs[-s:] if pick > 0 else degs[:s]
    return Fraction(best_top, best_bottom), tuple(sorted(y for _, y in chosen))


def regular_pair_exact(g: Graph, x: Iterable[int], y: Iterable[int], eps,
                       cap: int = DEFAULT_EXACT_CAP) -> PairVerdict:
    """Decide eps-regularity exactly; the witness is a pair of maximal deviation."""
    eps = as_fraction(eps)
    xs, ys = _sides(g, x, y)
    d0 = edge_density(g, xs, ys)
    if d0 in (0, 1):
        return PairVerdict(True, d0, eps, "homogeneous")
    swapped = len(xs) > len(ys)
    if swapped:
        xs, ys = ys, xs
    if len(xs) > cap:
        raise RegularityError(f"both sides exceed the exact-check cap of {cap}; use regular_pair_sampled")
    sx, sy = _threshold(eps, len(xs)), _threshold(eps, len(ys))
    worst = None
    for sub in range(1, 1 << len(xs)):
        size = sub.bit_count()
        if size < sx:
            continue
        chosen = [xs[i] for i in bits(sub)]
        dev, ysub = _extremes(g, mask_of(chosen), size, ys, d0, sy)
        if worst is None or dev > worst[0]:
            worst = (dev, tuple(chosen), ysub)
    dev, xw, yw = worst
    if swapped:
        xw, yw = yw, xw
    if dev > eps:
        return PairVerdict(False, d0, eps, "exact", (xw, yw), dev)
    return PairVerdict(True, d0, eps, "exact", deviation=dev)


def regular_pair_bruteforce(g: Graph, x: Iterable[int], y: Iterable[int], eps) -> bool:
    """Every admissible (X', Y') pair, no shortcuts; for cross-checking at tiny sizes."""
    eps = as_fraction(eps)
    xs, ys = _sides(g, x, y)
    d0 = edge_density(g, xs, ys)
    sx, sy = _threshold(eps, len(xs)), _threshold(eps, len(ys))
    for a in range(1, 1 << len(xs)):
        xa = [xs[i] for i in bits(a)]
        if len(xa) < sx:
            continue
        for b in range(1, 1 << len(ys)):
            yb = [ys[i] for i in bits(b)]
            if len(yb) >= sy and abs(edge_density(g, xa, yb) - d0) > eps:
                return False
    return True


def regular_pair_sampled(g: Graph, x: Iterable[int], y: Iterable[int], eps, trials: int = DEFAULT_TRIALS,
                         seed: int = 0) -> PairVerdict:
    """Search for a violation among random X' of the smaller side.

    Each trial draws X' of a random admissible size and pairs it with the
    worst Y' for that X'. Deterministic under ``seed``; the transcript lists
    the sampled X' in order.
    """
    if trials < 1:
        raise RegularityError("trials must be at least 1")
    eps = as_fraction(eps)
    xs, ys = _sides(g, x, y)
    d0 = edge_density(g, xs, ys)
    if d0 in (0, 1):
        return PairVerdict(True, d0, eps, "homogeneous")
    swapped = len(xs) > len(ys)
    if swapped:
        xs, ys = ys, xs
    sx, sy = _threshold(eps, len(xs)), _threshold(eps, len(ys))
    rng = random.Random(seed)
    transcript = []
    for t in range(trials):
        size = rng.randint(sx, len(xs))
        chosen = tuple(sorted(rng.sample(xs, size)))
        transcript.append(chosen)
        dev, ysub = _extremes(g, mask_of(chosen), size, ys, d0, sy)
        if dev > eps:
            xw, yw = (ysub, chosen) if swapped else (chosen, ysub)
            return PairVerdict(False, d0, eps, "sampled", (xw, yw), dev, t + 1, seed, transcript)
    return PairVerdict(True, d0, eps, "sampled", trials=trials, seed=seed, transcript=transcript)


def check_pair(g: Graph, x: Sequence[int], y: Sequence[int], eps, exact_cap: int = DEFAULT_EXACT_CAP,
               trials: int = DEFAULT_TRIALS, seed: int = 0) -> PairVerdict:
    """Exact when the smaller side fits under the cap, sampled otherwise."""
    if min(len(x), len(y)) <= exact_cap:
        return regular_pair_exact(g, x, y, eps, exact_cap)
    return regular_pair_sampled(g, x, y, eps, trials, seed)


# ---------------------------------------------------------------------------
# Partitions


@dataclass
class PartitionCertificate:
    blocks: list[tuple[int, ...]]
    eps: Fraction
    k: int
    pairs: dict[tuple[int, int], PairVerdict]
    passed: bool
    budget: int
    base: int
    rounds: int
    seed: int
    notes: list[str] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    @property
    def equitable(self) -> bool:
        return max(self.sizes) - min(self.sizes) <= 1

    @property
    def irregular_pairs(self) -> list[tuple[int, int]]:
        return [ij for ij, v in self.pairs.items() if not v.regular]

    def method_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for v in self.pairs.values():
            out[v.method] = out.get(v.method, 0) + 1
        return dict(sorted(out.items()))


def piece_budget(eps: Fraction, base: int = DEFAULT_BASE) -> int:
    """``ceil(base ** (1/eps))``, computed exactly for rational ``1/eps``."""
    inv = 1 / Fraction(eps)
    if inv.denominator == 1:
        return base ** inv.numerator
    return math.ceil(base ** float(inv) - 1e-9)


def _clusters(g: Graph, eps: Fraction) -> list[list[int]]:
    """Pivot clustering on neighborhoods, then refinement by majority fingerprints."""
    slack = math.floor(eps * g.n / 8)
    unassigned = set(range(g.n))
    clusters = []
    for v in range(g.n):
        if v not in unassigned:
            continue
        group = []
        for u in sorted(unassigned):
            diff = (g.adj[u] ^ g.adj[v]) & ~(1 << u | 1 << v)
            if diff.bit_count() <= slack:
                group.append(u)
        unassigned -= set(group)
        clusters.append(group)
    while True:
        masks = [mask_of(c) for c in clusters]

        def fingerprint(v: int) -> tuple[bool, ...]:
            out = []
            for m in masks:
                others = m & ~(1 << v)
                out.append(2 * (g.adj[v] & others).bit_count() > others.bit_count())
            return tuple(out)

        refined = []
        for c in clusters:
            parts: dict[tuple, list[int]] = {}
            for v in c:
                parts.setdefault(fingerprint(v), []).append(v)
            refined.extend(parts[key] for key in sorted(parts, key=lambda key: parts[key][0]))
        if len(refined) == len(clusters):
            return clusters
        clusters = refined


def _fit(sizes: list[int], q: int, r: int) -> list[int] | None:
    """How many (q+1)-pieces each cluster gets so every piece lies in one cluster."""
    reachable = {0: []}
    for s in sizes:
        nxt = {}
        for used, plan in reachable.items():
            for b in range(s // (q + 1) + 1):
                rest = s - b * (q + 1)
                if rest % q == 0 and used + b <= r and used + b not in nxt:
                    nxt[used + b] = plan + [b]
        reachable = nxt
    return reachable.get(r)


def _pack(clusters: list[list[int]], n: int, p: int) -> tuple[list[tuple[int, ...]], bool]:
    q, r = divmod(n, p)
    plan = _fit([len(c) for c in clusters], q, r)
    blocks = []
    if plan is not None:
        for c, big in zip(clusters, plan):
            pos = 0
            sizes = [q + 1] * big + [q] * ((len(c) - big * (q + 1)) // q)
            for s in sizes:
                blocks.append(tuple(sorted(c[pos:pos + s])))
                pos += s
        return sorted(blocks), True
    flat = [v for c in clusters for v in c]
    pos = 0
    for i in range(p):
        s = q + 1 if i < r else q
        blocks.append(tuple(sorted(flat[pos:pos + s])))
        pos += s
    return sorted(blocks), False


def _verify(g: Graph, blocks, eps, exact_cap, trials, seed, give_up=None) -> dict[tuple[int, int], PairVerdict]:
    pairs = {}
    bad = 0
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            pair_seed = seed * 1_000_003 + i * len(blocks) + j
            pairs[i, j] = check_pair(g, blocks[i], blocks[j], eps, exact_cap, trials, pair_seed)
            bad += not pairs[i, j].regular
            if give_up is not None and bad >= give_up:
                return pairs
    return pairs


def stable_regularity(g: Graph, eps, k: int, budget: int | None = None, base: int = DEFAULT_BASE,
                      seed: int = 0, exact_cap: int = DEFAULT_EXACT_CAP, trials: int = 2000) -> PartitionCertificate:
    """An equitable partition of a ``k``-stable graph with every pair eps-regular.

    Vertices are first grouped by near-identical neighborhoods and the groups
    refined until each vertex's majority pattern against the groups is
    uniform. The groups are then cut into ``p`` equitable pieces, inside
    single groups when the sizes allow, for ``p`` from the number of groups up
    to the budget, and every pair is checked. The certificate records how each
    pair was verified; a failed search returns the best partition found with
    ``passed`` false.
    """
    eps = as_fraction(eps)
    witness = find_half_graph(g, k)
    if witness is not None:
        raise NotStable(k, witness)
    if budget is None:
        budget = piece_budget(eps, base)
    if g.n == 0:
        return PartitionCertificate([], eps, k, {}, True, budget, base, 0, seed)
    clusters = _clusters(g, eps)
    notes = [f"{len(clusters)} neighborhood classes"]
    best = None
    rounds = 0
    start = max(1, min(len(clusters), budget, g.n))
    for p in range(start, min(budget, g.n) + 1):
        rounds += 1
        blocks, aligned = _pack(clusters, g.n, p)
        # a round that is already worse than the best one is abandoned early
        pairs = _verify(g, blocks, eps, exact_cap, trials, seed, None if best is None else best[0])
        bad = sum(not v.regular for v in pairs.values())
        if len(pairs) < p * (p - 1) // 2:
            continue
        if best is None or bad < best[0]:
            best = (bad, blocks, pairs, aligned)
        if bad == 0:
            break
    bad, blocks, pairs, aligned = best
    notes.append(f"{len(blocks)} pieces, {'aligned with' if aligned else 'cutting across'} the classes")
    if bad:
        notes.append(f"piece budget {budget} exhausted with {bad} irregular pairs")
    return PartitionCertificate(blocks, eps, k, pairs, bad == 0, budget, base, rounds, seed, notes)


def validate_certificate(g: Graph, cert: PartitionCertificate, trials: int = 2000, seed: int = 1) -> list[str]:
    """Re-check a certificate from scratch; returns a list of problems (empty when valid).

    Pairs are recounted directly: homogeneous pairs by their edge count,
    small pairs by brute force over all sub-pairs, larger ones by fresh
    sampling with a different seed.
    """
    problems = []
    seen = sorted(v for b in cert.blocks for v in b)
    if seen != list(range(g.n)):
        problems.append("blocks do not partition the vertex set")
    if cert.blocks and not cert.equitable:
        problems.append(f"piece sizes {sorted(set(cert.sizes))} are not equitable")
    expected = {(i, j) for i in range(len(cert.blocks)) for j in range(i + 1, len(cert.blocks))}
    if set(cert.pairs) != expected:
        problems.append("pair verdicts do not cover every pair of blocks")
    for (i, j), verdict in sorted(cert.pairs.items()):
        x, y = cert.blocks[i], cert.blocks[j]
        d = edge_density(g, x, y)
        if d != verdict.density:
            problems.append(f"pair {i},{j}: density {verdict.density} recorded, {d} counted")
            continue
        if d in (0, 1):
            ok = True
        elif len(x) + len(y) <= 16:
            ok = regular_pair_bruteforce(g, x, y, cert.eps)
        else:
            ok = regular_pair_sampled(g, x, y, cert.eps, trials, seed + i * len(cert.blocks) + j).regular
        if ok != verdict.regular:
            problems.append(f"pair {i},{j}: recorded {'regular' if verdict.regular else 'irregular'}, re-check disagrees")
        if not verdict.regular:
            xs, ys = verdict.witness
            if abs(edge_density(g, xs, ys) - d) <= cert.eps:
                problems.append(f"pair {i},{j}: witness does not violate the bound")
    if cert.passed and cert.irregular_pairs:
        problems.append("certificate passes with irregular pairs")
    return problems
