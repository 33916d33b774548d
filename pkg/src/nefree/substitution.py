"""Graph and poset substitution, direct/linear sums and labelled-chain sums.

In every substituted result the points of block ``v`` occupy one
consecutive range, blocks laid out in context order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ArityError
from .orders import Graph, Poset, antichain, chain, iter_bits


def block_offsets(blocks: Sequence) -> list[int]:
    """Starting index of each block in the substituted point layout."""
    offs, total = [], 0
    for b in blocks:
        offs.append(total)
        total += b.n
    return offs


def _shift(mask: int, off: int) -> int:
    return mask << off


def graph_substitute(K: Graph, blocks: Sequence[Graph]) -> Graph:
    """``K[H_v / v]``: edges inside each block plus all edges between blocks adjacent in K."""
    if len(blocks) != K.n:
        raise ArityError(f"context has {K.n} vertices but {len(blocks)} blocks were given")
    offs = block_offsets(blocks)
    span = [((1 << b.n) - 1) << o for b, o in zip(blocks, offs)]
    nbr = []
    for v, (H, o) in enumerate(zip(blocks, offs)):
        outside = 0
        for u in iter_bits(K.nbr[v]):
            outside |= span[u]
        for x in range(H.n):
            nbr.append(_shift(H.nbr[x], o) | outside)
    return Graph._trusted(len(nbr), nbr)


def poset_substitute(Q: Poset, blocks: Sequence[Poset]) -> Poset:
    """``Q[P_v / v]``: order inside each block, and ``x < y`` across blocks when ``u <_Q v``."""
    if len(blocks) != Q.n:
        raise ArityError(f"context has {Q.n} points but {len(blocks)} blocks were given")
    offs = block_offsets(blocks)
    span = [((1 << b.n) - 1) << o for b, o in zip(blocks, offs)]
    up = []
    for v, (P, o) in enumerate(zip(blocks, offs)):
        above = 0
        for u in iter_bits(Q.up[v]):
            above |= span[u]
        for x in range(P.n):
            up.append(_shift(P.up[x], o) | above)
    return Poset._trusted(len(up), up)


def direct_sum(*blocks: Poset) -> Poset:
    if not blocks:
        raise ArityError("a sum needs at least one block")
    return poset_substitute(antichain(len(blocks)), blocks)


def linear_sum(*blocks: Poset) -> Poset:
    """Blocks stacked bottom to top: every point of block i lies below every point of block j > i."""
    if not blocks:
        raise ArityError("a sum needs at least one block")
    return poset_substitute(chain(len(blocks)), blocks)


def q_i_r(length: int, r: Sequence[int]) -> Poset:
    """Index poset of a labelled chain on ``0 < 1 < ... < length-1``.

    For ``i < j``: ``r[i] == 0`` makes them incomparable, ``-1`` puts
    ``i`` below ``j`` and ``+1`` puts ``j`` below ``i``.  ``r[-1]`` is never
    consulted.
    """
    if len(r) != length:
        raise ArityError(f"need {length} r-values, got {len(r)}")
    if any(v not in (-1, 0, 1) for v in r):
        raise ValueError("r-values must lie in {-1, 0, +1}")
    up = [0] * length
    for i in range(length):
        later = ((1 << length) - 1) & ~((1 << (i + 1)) - 1)
        if r[i] == -1:
            up[i] |= later
        elif r[i] == 1:
            for j in iter_bits(later):
                up[j] |= 1 << i
    return Poset._trusted(length, up)


@dataclass(frozen=True)
class LabelledChain:
    """Finite chain of labels ``(block, r)``; position 0 is the bottom of the index chain."""

    labels: tuple[tuple[Poset, int], ...]

    def __post_init__(self):
        labels = tuple((b, int(r)) for b, r in self.labels)
        if not labels:
            raise ValueError("a labelled chain needs at least one position")
        if any(r not in (-1, 0, 1) for _, r in labels):
            raise ValueError("r-values must lie in {-1, 0, +1}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, *labels: tuple[Poset, int]) -> "LabelledChain":
        return cls(tuple(labels))

    def __len__(self):
        return len(self.labels)

    @property
    def length(self) -> int:
        return len(self.labels)

    @property
    def blocks(self) -> list[Poset]:
        return [b for b, _ in self.labels]

    @property
    def r(self) -> list[int]:
        return [r for _, r in self.labels]

    def parallel_positions(self) -> list[int]:
        return [i for i, (_, r) in enumerate(self.labels) if r == 0]

    def linear_positions(self) -> list[int]:
        return [i for i, (_, r) in enumerate(self.labels) if r != 0]

    def __add__(self, other: "LabelledChain") -> "LabelledChain":
        return LabelledChain(self.labels + other.labels)


def sum_labelled_chain(C: LabelledChain) -> Poset:
    return poset_substitute(q_i_r(C.length, C.r), C.blocks)


def ordinal_product(k: int, C: LabelledChain) -> LabelledChain:
    """Each position of ``C`` replaced by ``k`` adjacent copies of its label."""
    if k < 1:
        raise ValueError("k must be positive")
    return LabelledChain(tuple(lab for lab in C.labels for _ in range(k)))


def reverse(C: LabelledChain) -> LabelledChain:
    return LabelledChain(tuple(reversed(C.labels)))


def plus_star(C0: LabelledChain, C1: LabelledChain) -> LabelledChain:
    """``C0 +* C1 = C1* + C0*``."""
    return reverse(C1) + reverse(C0)


def sigma_star(chains: Sequence[LabelledChain]) -> LabelledChain:
    """Reverse of the ordered sum of ``chains``."""
    out = chains[0]
    for c in chains[1:]:
        out = out + c
    return reverse(out)
