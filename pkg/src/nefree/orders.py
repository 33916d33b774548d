"""Finite posets, graphs and binary structures.

Points are always the integers ``0..n-1``.  Relations are stored as
boolean tables; every type also exposes bitmask views (``up``, ``down``,
``nbr``) which the exhaustive kernels use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import CycleError

Table = tuple[tuple[bool, ...], ...]


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _table_from_masks(n: int, masks: Sequence[int]) -> Table:
    return tuple(tuple(bool(masks[i] >> j & 1) for j in range(n)) for i in range(n))


def _masks_from_table(table) -> tuple[int, ...]:
    out = []
    for row in table:
        m = 0
        for j, v in enumerate(row):
            if v:
                m |= 1 << j
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class Poset:
    """A finite strict partial order; ``rel[i][j]`` means ``i < j``."""

    n: int
    rel: Table

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a poset needs at least one point")
        rel = tuple(tuple(bool(v) for v in row) for row in self.rel)
        if len(rel) != self.n or any(len(row) != self.n for row in rel):
            raise ValueError("relation table must be n x n")
        object.__setattr__(self, "rel", rel)
        up = _masks_from_table(rel)
        for i in range(self.n):
            if up[i] >> i & 1:
                raise CycleError(f"point {i} is below itself")
            for j in iter_bits(up[i]):
                if up[j] >> i & 1:
                    raise ValueError(f"points {i} and {j} are mutually below each other")
                if up[j] & ~up[i]:
                    raise ValueError("relation is not transitive")
        self.__dict__["up"] = up

    @classmethod
    def _trusted(cls, n: int, up: Sequence[int]) -> "Poset":
        # No validation: caller guarantees a strict order given as up-masks.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "rel", _table_from_masks(n, up))
        obj.__dict__["up"] = tuple(up)
        return obj

    @cached_property
    def up(self) -> tuple[int, ...]:
        return _masks_from_table(self.rel)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.n
        for i in range(self.n):
            for j in iter_bits(self.up[i]):
                down[j] |= 1 << i
        return tuple(down)

    @cached_property
    def comp(self) -> tuple[int, ...]:
        """Bitmask of points comparable to each point (excluding itself)."""
        return tuple(u | d for u, d in zip(self.up, self.down))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def less(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def incomparable(self, i: int, j: int) -> bool:
        return i != j and not (self.comp[i] >> j & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in iter_bits(self.up[i])]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse-diagram edges ``(i, j)`` with ``i < j`` and nothing between."""
        out = []
        for i in range(self.n):
            for j in iter_bits(self.up[i]):
                if not (self.up[i] & self.down[j]):
                    out.append((i, j))
        return out

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Return the poset with point ``i`` renamed to ``perm[i]``."""
        up = [0] * self.n
        for i in range(self.n):
            m = 0
            for j in iter_bits(self.up[i]):
                m |= 1 << perm[j]
            up[perm[i]] = m
        return Poset._trusted(self.n, up)

    def __repr__(self):
        return f"Poset(n={self.n}, covers={self.covers()})"


@dataclass(frozen=True)
class Graph:
    """A finite simple graph given by a symmetric, irreflexive adjacency table."""

    n: int
    adj: Table

    def __post_init__(self):
        adj = tuple(tuple(bool(v) for v in row) for row in self.adj)
        if len(adj) != self.n or any(len(row) != self.n for row in adj):
            raise ValueError("adjacency table must be n x n")
        for i in range(self.n):
            if adj[i][i]:
                raise ValueError("graphs have no loops")
            for j in range(i):
                if adj[i][j] != adj[j][i]:
                    raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def _trusted(cls, n: int, nbr: Sequence[int]) -> "Graph":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "adj", _table_from_masks(n, nbr))
        obj.__dict__["nbr"] = tuple(nbr)
        return obj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbr = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError("graphs have no loops")
            nbr[i] |= 1 << j
            nbr[j] |= 1 << i
        return cls._trusted(n, nbr)

    @cached_property
    def nbr(self) -> tuple[int, ...]:
        return _masks_from_table(self.adj)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in iter_bits(self.nbr[i]) if i < j]

    def complement(self) -> "Graph":
        full = self.full
        return Graph._trusted(self.n, [full & ~self.nbr[i] & ~(1 << i) for i in range(self.n)])

    def induced(self, points: Sequence[int]) -> "Graph":
        pts = sorted(points)
        pos = {p: k for k, p in enumerate(pts)}
        nbr = []
        for p in pts:
            nbr.append(to_mask(pos[q] for q in iter_bits(self.nbr[p]) if q in pos))
        return Graph._trusted(len(pts), nbr)


@dataclass(frozen=True)
class BinaryStructure:
    """A finite set with a value map ``d`` into {-1, 0, +1}; the diagonal is ignored."""

    n: int
    d: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = tuple(tuple(int(v) for v in row) for row in self.d)
        if len(d) != self.n or any(len(row) != self.n for row in d):
            raise ValueError("value table must be n x n")
        if any(v not in (-1, 0, 1) for row in d for v in row):
            raise ValueError("values must lie in {-1, 0, +1}")
        # diagonal normalised to 0 so equality ignores it
        d = tuple(tuple(0 if i == j else row[j] for j in range(self.n)) for i, row in enumerate(d))
        object.__setattr__(self, "d", d)

    @classmethod
    def from_poset(cls, P: Poset) -> "BinaryStructure":
        d = [[0] * P.n for _ in range(P.n)]
        for i, j in P.pairs():
            d[i][j] = 1
            d[j][i] = -1
        return cls(P.n, tuple(map(tuple, d)))

    @classmethod
    def from_graph(cls, G: Graph) -> "BinaryStructure":
        return cls(G.n, tuple(tuple(int(v) for v in row) for row in G.adj))

    @cached_property
    def out_classes(self) -> tuple[dict[int, int], ...]:
        """``out_classes[x][v]`` is the mask of ``y != x`` with ``d(x, y) == v``."""
        res = []
        for x in range(self.n):
            cls_ = {}
            for y in range(self.n):
                if y != x:
                    v = self.d[x][y]
                    cls_[v] = cls_.get(v, 0) | 1 << y
            res.append(cls_)
        return tuple(res)

    @cached_property
    def in_classes(self) -> tuple[dict[int, int], ...]:
        res = []
        for x in range(self.n):
            cls_ = {}
            for y in range(self.n):
                if y != x:
                    v = self.d[y][x]
                    cls_[v] = cls_.get(v, 0) | 1 << y
            res.append(cls_)
        return tuple(res)

    @cached_property
    def kind(self) -> str | None:
        """``"poset"`` or ``"graph"`` when ``d`` encodes one of those, else None."""
        n, d = self.n, self.d
        if all(d[i][j] == -d[j][i] for i in range(n) for j in range(i)):
            up = [to_mask(j for j in range(n) if d[i][j] == 1) for i in range(n)]
            if all(not (up[j] & ~up[i]) for i in range(n) for j in iter_bits(up[i])):
                return "poset"
        if all(d[i][j] == d[j][i] and d[i][j] in (0, 1) for i in range(n) for j in range(i)):
            return "graph"
        return None

    def restrict(self, points: Sequence[int]) -> "BinaryStructure":
        pts = sorted(points)
        return BinaryStructure(len(pts), tuple(tuple(self.d[a][b] for b in pts) for a in pts))


# -- constructors ----------------------------------------------------------


def from_strict_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Poset:
    """Transitive closure of ``pairs`` (each ``(i, j)`` meaning ``i < j``)."""
    if n < 1:
        raise ValueError("a poset needs at least one point")
    up = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
        up[i] |= 1 << j
    # Warshall on bitmasks
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if up[i] & bit:
                up[i] |= up[k]
    for i in range(n):
        if up[i] >> i & 1:
            raise CycleError(f"closure puts point {i} below itself")
    return Poset._trusted(n, up)


def chain(k: int) -> Poset:
    return from_strict_pairs(k, [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> Poset:
    return Poset._trusted(k, [0] * k)


def n_poset() -> Poset:
    """The four-point poset N with a<b, c<b, c<d on points a,b,c,d = 0,1,2,3."""
    return from_strict_pairs(4, [(0, 1), (2, 1), (2, 3)])


def is_chain(P: Poset) -> bool:
    return all(P.comp[i] == P.full & ~(1 << i) for i in range(P.n))


def is_antichain(P: Poset) -> bool:
    return not any(P.up)


# -- basic predicates ------------------------------------------------------


def comparability_graph(P: Poset) -> Graph:
    return Graph._trusted(P.n, P.comp)


def dual(P: Poset) -> Poset:
    return Poset._trusted(P.n, P.down)


def induced(P: Poset, points: Iterable[int]) -> tuple[Poset, tuple[int, ...]]:
    """Restriction of ``P`` to ``points``; returns ``(subposet, index_map)``.

    ``index_map[k]`` is the original point that became point ``k``.
    """
    pts = sorted(set(points))
    for p in pts:
        if not 0 <= p < P.n:
            raise IndexError(f"point {p} out of range for n={P.n}")
    pos = {p: k for k, p in enumerate(pts)}
    up = [to_mask(pos[q] for q in iter_bits(P.up[p]) if q in pos) for p in pts]
    return Poset._trusted(len(pts), up), tuple(pts)


def _mask_components(n: int, nbr: Sequence[int], within: int) -> list[int]:
    comps = []
    left = within
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= nbr[v]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        left &= ~comp
    return comps


def graph_components(G: Graph, within: int | None = None) -> list[int]:
    """Connected components of ``G`` (restricted to ``within``) as bitmasks."""
    return _mask_components(G.n, G.nbr, G.full if within is None else within)


def components(P: Poset) -> list[list[int]]:
    """Components of the comparability graph, sorted by minimum point."""
    return [list(iter_bits(c)) for c in _mask_components(P.n, P.comp, P.full)]


def is_connected(P: Poset) -> bool:
    return len(_mask_components(P.n, P.comp, P.full)) == 1


def has_ccgc(P: Poset) -> bool:
    """True when the complement of the comparability graph is connected."""
    full = P.full
    co = [full & ~P.comp[i] & ~(1 << i) for i in range(P.n)]
    return len(_mask_components(P.n, co, full)) == 1


def _is_p4(nbr: Sequence[int], quad: Sequence[int]) -> bool:
    m = to_mask(quad)
    degs = sorted(bin(nbr[v] & m).count("1") for v in quad)
    # 3 edges with degrees 1,1,2,2 on four vertices is exactly P4
    return degs == [1, 1, 2, 2]


def _cograph_recursive(nbr: Sequence[int], full_n: int, within: int) -> bool:
    if within & (within - 1) == 0:
        return True
    comps = _mask_components(full_n, nbr, within)
    if len(comps) > 1:
        return all(_cograph_recursive(nbr, full_n, c) for c in comps)
    co = [within & ~nbr[v] & ~(1 << v) if within >> v & 1 else 0 for v in range(full_n)]
    cocomps = _mask_components(full_n, co, within)
    if len(cocomps) > 1:
        return all(_cograph_recursive(nbr, full_n, c) for c in cocomps)
    return False


def is_cograph(G: Graph, method: str = "auto") -> bool:
    """True when ``G`` has no induced path on four vertices.

    ``method`` is ``"scan"`` (all 4-subsets), ``"recursive"`` (every induced
    piece with two or more vertices is disconnected or co-disconnected) or
    ``"auto"`` (scan up to 12 vertices).
    """
    if method == "auto":
        method = "scan" if G.n <= 12 else "recursive"
    if method == "scan":
        return not any(_is_p4(G.nbr, quad) for quad in combinations(range(G.n), 4))
    if method == "recursive":
        return _cograph_recursive(G.nbr, G.n, G.full)
    raise ValueError(f"unknown method {method!r}")


def find_induced_n(P: Poset) -> tuple[int, int, int, int] | None:
    """Direct scan for points (a, b, c, d) with a<b, c<b, c<d and a, d, and b, d, and a, c incomparable."""
    for quad in combinations(range(P.n), 4):
        for a, b, c, d in permutations(quad):
            if (
                P.less(a, b)
                and P.less(c, b)
                and P.less(c, d)
                and P.incomparable(a, c)
                and P.incomparable(b, d)
                and P.incomparable(a, d)
            ):
                return (a, b, c, d)
    return None


def is_nfree(P: Poset, crosscheck: bool = False) -> bool:
    """True when ``P`` embeds no N, decided on the comparability graph.

    With ``crosscheck`` the direct 4-subset scan is run as well and any
    disagreement raises.
    """
    verdict = is_cograph(comparability_graph(P))
    if crosscheck:
        direct = find_induced_n(P) is None
        if direct != verdict:
            raise AssertionError(f"N-scan ({direct}) disagrees with cograph test ({verdict}) on {P!r}")
    return verdict
