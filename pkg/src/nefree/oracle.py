"""Brute-force ground truth: embeddings, isomorphism, poset enumeration.

Every routine here is exhaustive.  Embeddings are *induced*: ``x < y``
iff ``f(x) < f(y)`` and ``x`` incomparable to ``y`` iff their images are.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

from .errors import (
    ENUM_ISO_CAP,
    ENUM_LABELED_CAP,
    CCGCError,
    SizeError,
    StructureError,
    embed_cap,
)
from .orders import Poset, has_ccgc, iter_bits
from .substitution import block_offsets, direct_sum, linear_sum

_DEFAULT = object()


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _inc_masks(P: Poset) -> list[int]:
    full = P.full
    return [full & ~P.comp[i] & ~(1 << i) for i in range(P.n)]


def is_embedding(f: Sequence[int], P: Poset, Q: Poset) -> bool:
    """Post-hoc check that ``f`` is an injective, induced order embedding."""
    if len(f) != P.n or len(set(f)) != P.n:
        return False
    if any(not 0 <= y < Q.n for y in f):
        return False
    for x in range(P.n):
        for x2 in range(P.n):
            if x != x2 and P.less(x, x2) != Q.less(f[x], f[x2]):
                return False
    return True


def _search(P: Poset, Q: Poset, domains: list[int]) -> Iterator[tuple[int, ...]]:
    n = P.n
    qup, qdown, qinc = Q.up, Q.down, _inc_masks(Q)
    pup, pdown = P.up, P.down
    degree = [_popcount(c) for c in P.comp]
    assign = [-1] * n

    def rec(doms: list[int], free: int):
        if not free:
            yield tuple(assign)
            return
        # most constrained point first; ties go to higher comparability degree
        x = min(iter_bits(free), key=lambda v: (_popcount(doms[v]), -degree[v], v))
        rest = free & ~(1 << x)
        for y in iter_bits(doms[x]):
            new = doms[:]
            ok = True
            for x2 in iter_bits(rest):
                if pup[x] >> x2 & 1:
                    allowed = qup[y]
                elif pdown[x] >> x2 & 1:
                    allowed = qdown[y]
                else:
                    allowed = qinc[y]
                d = doms[x2] & allowed
                if not d:
                    ok = False
                    break
                new[x2] = d
            if ok:
                assign[x] = y
                yield from rec(new, rest)
                assign[x] = -1

    yield from rec(domains, P.full)


def _embedding_domains(P: Poset, Q: Poset) -> list[int]:
    pinc, qinc = _inc_masks(P), _inc_masks(Q)
    qstats = [(_popcount(Q.up[y]), _popcount(Q.down[y]), _popcount(qinc[y])) for y in range(Q.n)]
    doms = []
    for x in range(P.n):
        u, d, i = _popcount(P.up[x]), _popcount(P.down[x]), _popcount(pinc[x])
        m = 0
        for y, (qu, qd, qi) in enumerate(qstats):
            if qu >= u and qd >= d and qi >= i:
                m |= 1 << y
        doms.append(m)
    return doms


def _check_cap(Q: Poset, cap):
    if cap is _DEFAULT:
        cap = embed_cap()
    if cap is not None and Q.n > cap:
        raise SizeError(f"embedding search is capped at {cap} target points, got {Q.n}")


def iter_embeddings(P: Poset, Q: Poset, cap=_DEFAULT) -> Iterator[tuple[int, ...]]:
    """All induced embeddings of ``P`` into ``Q``, in deterministic order."""
    _check_cap(Q, cap)
    if P.n > Q.n:
        return iter(())
    return _search(P, Q, _embedding_domains(P, Q))


def find_embedding(P: Poset, Q: Poset, cap=_DEFAULT) -> tuple[int, ...] | None:
    """First embedding found by the backtracking order, or None."""
    return next(iter(iter_embeddings(P, Q, cap)), None)


def naive_embeddings(P: Poset, Q: Poset) -> list[tuple[int, ...]]:
    """Every injection checked one by one; only for tiny cross-checks."""
    return [f for f in permutations(range(Q.n), P.n) if is_embedding(f, P, Q)]


# -- colour refinement ----------------------------------------------------------------


def refine_colours(*posets: Poset) -> list[list[int]]:
    """Joint 1-dimensional colour refinement; colours are comparable across inputs."""
    cols = [[(_popcount(P.up[x]), _popcount(P.down[x])) for x in range(P.n)] for P in posets]
    rank = _rank(cols)
    while True:
        sigs = []
        for P, col in zip(posets, rank):
            sig = []
            for x in range(P.n):
                ups = tuple(sorted(col[y] for y in iter_bits(P.up[x])))
                downs = tuple(sorted(col[y] for y in iter_bits(P.down[x])))
                sig.append((col[x], ups, downs))
            sigs.append(sig)
        new = _rank(sigs)
        if _ncolours(new) == _ncolours(rank):
            return new
        rank = new


def _rank(sigs):
    order = {s: k for k, s in enumerate(sorted({s for sig in sigs for s in sig}))}
    return [[order[s] for s in sig] for sig in sigs]


def _ncolours(rank):
    return len({c for col in rank for c in col})


def _same_invariants(P: Poset, Q: Poset):
    if P.n != Q.n or sum(map(_popcount, P.up)) != sum(map(_popcount, Q.up)):
        return None
    cp, cq = refine_colours(P, Q)
    if sorted(cp) != sorted(cq):
        return None
    return cp, cq


def find_isomorphism(P: Poset, Q: Poset, cap=_DEFAULT) -> tuple[int, ...] | None:
    _check_cap(Q, cap)
    inv = _same_invariants(P, Q)
    if inv is None:
        return None
    cp, cq = inv
    doms = [sum(1 << y for y in range(Q.n) if cq[y] == cp[x]) for x in range(P.n)]
    return next(iter(_search(P, Q, doms)), None)


def is_isomorphic(P: Poset, Q: Poset, cap=_DEFAULT) -> bool:
    return find_isomorphism(P, Q, cap) is not None


def equimorphic(P: Poset, Q: Poset, cap=_DEFAULT) -> bool:
    """Each embeds in the other."""
    _check_cap(P, cap)
    _check_cap(Q, cap)
    return find_embedding(P, Q, None) is not None and find_embedding(Q, P, None) is not None


def automorphisms(P: Poset, cap=_DEFAULT) -> Iterator[tuple[int, ...]]:
    """Self-embeddings of a finite poset (all of them are automorphisms)."""
    return iter_embeddings(P, P, cap)


# -- enumeration ------------------------------------------------------------------------


def posets_by_relation_scan(n: int) -> Iterator[Poset]:
    """Every labeled poset on ``n`` points: each unordered pair is <, > or incomparable,
    and the resulting relation is kept when transitive."""
    if n < 1:
        raise ValueError("n must be positive")
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        up = [0] * n
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                up[i] |= 1 << j
            elif c == 2:
                up[j] |= 1 << i
        if all(not (up[j] & ~up[i]) for i in range(n) for j in iter_bits(up[i])):
            yield Poset._trusted(n, up)


def _extensions(P: Poset) -> Iterator[Poset]:
    """All posets on ``P.n + 1`` points whose restriction to ``0..P.n-1`` is ``P``."""
    m = P.n
    new = 1 << m
    downsets = [s for s in range(1 << m) if all(not (P.down[x] & ~s) for x in iter_bits(s))]
    upsets = [s for s in range(1 << m) if all(not (P.up[x] & ~s) for x in iter_bits(s))]
    for D in downsets:
        common_up = (1 << m) - 1
        for d in iter_bits(D):
            common_up &= P.up[d]
        for U in upsets:
            if U & D or U & ~common_up:
                continue
            up = [P.up[x] | (new if D >> x & 1 else 0) for x in range(m)]
            up.append(U)
            yield Poset._trusted(m + 1, up)


def posets_by_extension(n: int) -> Iterator[Poset]:
    """Every labeled poset on ``n`` points, grown one point at a time."""
    if n < 1:
        raise ValueError("n must be positive")
    level = [Poset._trusted(1, [0])]
    for _ in range(n - 1):
        level = [Q for P in level for Q in _extensions(P)]
    return iter(level)


def canonical_key(P: Poset) -> tuple[int, ...]:
    """Isomorphism-invariant key: least up-mask table over colour-respecting orderings."""
    (col,) = refine_colours(P)
    classes = {}
    for x in range(P.n):
        classes.setdefault(col[x], []).append(x)
    cells = [classes[c] for c in sorted(classes)]
    best = None
    for parts in product(*(permutations(c) for c in cells)):
        order = [x for part in parts for x in part]
        pos = {x: k for k, x in enumerate(order)}
        key = tuple(sum(1 << pos[y] for y in iter_bits(P.up[x])) for x in order)
        if best is None or key < best:
            best = key
    return best


def enumerate_posets(n: int, up_to_iso: bool = False) -> Iterator[Poset]:
    """All posets on ``n`` points, labeled (n <= 6) or one per isomorphism class (n <= 7)."""
    if not up_to_iso:
        if n > ENUM_LABELED_CAP:
            raise SizeError(f"labeled enumeration is capped at n={ENUM_LABELED_CAP}")
        return posets_by_extension(n)
    if n > ENUM_ISO_CAP:
        raise SizeError(f"up-to-isomorphism enumeration is capped at n={ENUM_ISO_CAP}")
    level = {canonical_key(Poset._trusted(1, [0])): Poset._trusted(1, [0])}
    for _ in range(n - 1):
        nxt = {}
        for P in level.values():
            for Q in _extensions(P):
                nxt.setdefault(canonical_key(Q), Q)
        level = nxt
    return iter(sorted(level.values(), key=canonical_key))


# -- summand index maps -----------------------------------------------------------------


@dataclass(frozen=True)
class IndexMap:
    map: tuple[int, ...]
    injective: bool
    order_preserving: bool
    surjective: bool

    @property
    def chain_isomorphism(self) -> bool:
        return self.injective and self.surjective and self.order_preserving


def induced_index_map(
    f: Sequence[int], P_summands: Sequence[Poset], Q_summands: Sequence[Poset]
) -> IndexMap:
    """Index map of an embedding between two linear sums whose summands all have CCGC.

    ``f`` maps points of ``linear_sum(*P_summands)`` to points of
    ``linear_sum(*Q_summands)``.  Each summand of the source lands inside a
    single summand of the target; the map records which.
    """
    for s in list(P_summands) + list(Q_summands):
        if not has_ccgc(s):
            raise CCGCError("every summand must have a connected co-comparability graph")
    q_owner = []
    for j, s in enumerate(Q_summands):
        q_owner.extend([j] * s.n)
    offs = block_offsets(P_summands)
    fmap = []
    for i, (s, o) in enumerate(zip(P_summands, offs)):
        targets = {q_owner[f[o + x]] for x in range(s.n)}
        if len(targets) != 1:
            raise StructureError(f"summand {i} is spread over target summands {sorted(targets)}")
        fmap.append(targets.pop())
    order_ok = all(fmap[i] <= fmap[i + 1] for i in range(len(fmap) - 1))
    return IndexMap(
        tuple(fmap),
        injective=len(set(fmap)) == len(fmap),
        order_preserving=order_ok,
        surjective=set(fmap) == set(range(len(Q_summands))),
    )


# -- random instances -------------------------------------------------------------------


def random_poset(n: int, rng: random.Random, p: float | None = None) -> Poset:
    """Closure of a random relation compatible with a random linear order."""
    from .orders import from_strict_pairs

    if p is None:
        p = rng.uniform(0.1, 0.7)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return from_strict_pairs(n, pairs)


def random_nfree_poset(n: int, rng: random.Random, shuffle: bool = True) -> Poset:
    """Random series-parallel poset on ``n`` points built by direct and linear sums."""

    def build(k: int) -> Poset:
        if k == 1:
            return Poset._trusted(1, [0])
        parts = rng.randint(2, min(k, 4))
        cuts = sorted(rng.sample(range(1, k), parts - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [k])]
        blocks = [build(s) for s in sizes]
        return direct_sum(*blocks) if rng.random() < 0.5 else linear_sum(*blocks)

    P = build(n)
    if shuffle:
        perm = list(range(n))
        rng.shuffle(perm)
        P = P.relabel(perm)
    return P


def random_relabel(P: Poset, rng: random.Random) -> tuple[Poset, list[int]]:
    perm = list(range(P.n))
    rng.shuffle(perm)
    return P.relabel(perm), perm


def factorial_check(n: int, classes: Sequence[Poset]) -> int:
    """Sum of ``n! / |Aut(P)|`` over class representatives (labeled count by orbits)."""
    return sum(math.factorial(n) // sum(1 for _ in automorphisms(P, None)) for P in classes)
