"""Named posets and finite windows of the labelled-chain sibling constructions.

An infinite labelled chain with no least element is represented by a
finite terminal window, listed bottom first.  The constructions insert
small gadgets just above chosen anchor positions; the gadget sizes encode
a bit pattern, which is what keeps different patterns apart up to
isomorphism.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import AnchorError, ParseError, RegimeError, SizeError
from .expr import LSum, Lin, evaluate, parse
from .orders import Poset, antichain, chain, is_antichain, is_chain, is_nfree, n_poset
from .oracle import find_embedding, is_isomorphic
from .substitution import LabelledChain, linear_sum, sum_labelled_chain

_NAME = re.compile(r"^\s*(n|chain|antichain|c|a|A|B)\s*(?:[(_:]\s*(\d+)\s*\)?)?\s*$")


def gen_A(n: int) -> Poset:
    """Linear sum of ``n`` two-element antichains."""
    if n < 1:
        raise ValueError("n must be positive")
    return linear_sum(*[antichain(2)] * n)


def gen_B(n: int) -> Poset:
    """``gen_A(n)`` with a new bottom and a new top point."""
    if n < 1:
        raise ValueError("n must be positive")
    return linear_sum(chain(1), *[antichain(2)] * n, chain(1))


def gen_named(name: str) -> Poset:
    """``n``, ``chain(k)``, ``antichain(k)``, ``A(k)`` or ``B(k)`` (also ``chain:k``, ``A_k``)."""
    m = _NAME.match(name)
    if not m:
        raise ParseError(f"unknown generator {name!r}")
    kind, k = m.group(1), m.group(2)
    if kind == "n":
        if k is not None:
            raise ParseError("n takes no size")
        return n_poset()
    if k is None:
        raise ParseError(f"{kind} needs a size")
    k = int(k)
    if k < 1:
        raise ParseError("sizes must be positive")
    return {"chain": chain, "c": chain, "antichain": antichain, "a": antichain, "A": gen_A, "B": gen_B}[kind](k)


# -- windows ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BitPattern:
    """``bits[n]`` is the bit used at the n-th anchor, counted downward from the top."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("a bit pattern needs at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BitPattern":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParseError(f"bad bit pattern {text!r}")
        return cls(tuple(int(c) for c in text))

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class TruncationWindow:
    """Terminal window of a labelled chain, bottom first, with its anchor positions.

    By default the anchors are every position with ``|r| = 1``.
    """

    base: LabelledChain
    anchors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        anchors = tuple(self.anchors) or tuple(self.base.linear_positions())
        if not anchors:
            raise AnchorError("window has no position with |r| = 1")
        if any(not 0 <= a < len(self.base) or self.base.r[a] == 0 for a in anchors):
            raise AnchorError("anchors must be in-range positions with |r| = 1")
        object.__setattr__(self, "anchors", tuple(sorted(set(anchors))))

    @property
    def depth(self) -> int:
        return len(self.anchors)

    def used_anchors(self, f: BitPattern) -> list[int]:
        """Anchor positions for ``f``, highest first: the lowest ``len(f)`` anchors."""
        if len(f) > self.depth:
            raise AnchorError(f"pattern of length {len(f)} needs {len(f)} anchors, window has {self.depth}")
        return sorted(self.anchors[: len(f)], reverse=True)


def periodic_window(pattern: Sequence[tuple[Poset, int]], repeats: int) -> LabelledChain:
    """``repeats`` copies of ``pattern`` stacked; a finite piece of its ω*-power."""
    if repeats < 1:
        raise ValueError("repeats must be positive")
    return LabelledChain(tuple(pattern) * repeats)


def window_from_text(text: str) -> TruncationWindow:
    """``q[r...](blocks) [anchors:i,j,...]``; a ``lin(...)`` window means every r is -1."""
    m = re.match(r"^(.*?)(?:[\s;]+anchors:\s*([\d,\s]+))?\s*$", text, re.S)
    body, anchors = m.group(1), m.group(2)
    e = parse(body)
    if isinstance(e, LSum):
        labels = tuple((evaluate(p), r) for p, r in zip(e.parts, e.r))
    elif isinstance(e, Lin):
        labels = tuple((evaluate(p), -1) for p in e.parts)
    else:
        raise ParseError("a window must be a q[...](...) or lin(...) expression")
    pos = ()
    if anchors:
        try:
            pos = tuple(int(a) for a in anchors.replace(" ", "").split(",") if a)
        except ValueError:
            raise ParseError(f"bad anchor list {anchors!r}") from None
    return TruncationWindow(LabelledChain(labels), pos)


def _parity_adjusted(P: Poset) -> Poset:
    if P.n % 2 == 0 and is_chain(P):
        return chain(P.n + 1)
    if P.n % 2 == 0 and is_antichain(P):
        return antichain(P.n + 1)
    return P


def cf_window(window: TruncationWindow, f: BitPattern) -> LabelledChain:
    """Insert the pair ``(antichain(2f+2), 0), (chain(2f+2), r(a))`` above each used anchor ``a``.

    Chain and antichain blocks of even size in the window first gain one
    point, so that the inserted blocks are the only even ones.
    """
    used = set(window.used_anchors(f))
    bit_at = {a: f.bits[k] for k, a in enumerate(window.used_anchors(f))}
    out = []
    for i, (P, r) in enumerate(window.base.labels):
        out.append((_parity_adjusted(P), r))
        if i in used:
            size = 2 * bit_at[i] + 2
            out.append((antichain(size), 0))
            out.append((chain(size), r))
    return LabelledChain(tuple(out))


def linear_preprocess(labels: Sequence[tuple[Poset, int]]) -> tuple[list[tuple[Poset, int]], list[int]]:
    """Add a two-element antichain above every maximal run of exactly 2 or 4 non-trivial blocks.

    Returns the new labels and, for each original position, its new index.
    """
    nontrivial = [P.n > 1 for P, _ in labels]
    run_end = set()
    i = 0
    while i < len(labels):
        if not nontrivial[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(labels) and nontrivial[j + 1]:
            j += 1
        if j - i + 1 in (2, 4):
            run_end.add(j)
        i = j + 1
    out, where = [], []
    for i, lab in enumerate(labels):
        where.append(len(out))
        out.append(lab)
        if i in run_end:
            out.append((antichain(2), -1))
    return out, where


def cf_linear_window(window: TruncationWindow, f: BitPattern) -> LabelledChain:
    """Linear-sum variant: above each used anchor insert the blocks of ``gen_B(2f+2)``.

    Every r must be -1.  Only anchors on non-trivial blocks are used.  Runs
    of 2 or 4 non-trivial blocks are first lengthened to 3 or 5.
    """
    labels = window.base.labels
    if any(r != -1 for _, r in labels):
        raise RegimeError("linear windows need r = -1 everywhere")
    anchors = [a for a in window.anchors if labels[a][0].n > 1]
    if not anchors:
        raise AnchorError("window has no non-trivial block to anchor on")
    if len(f) > len(anchors):
        raise AnchorError(f"pattern of length {len(f)} needs {len(f)} anchors, window has {len(anchors)}")
    used = sorted(anchors[: len(f)], reverse=True)
    bit_at = {a: f.bits[k] for k, a in enumerate(used)}
    pre, where = linear_preprocess(labels)
    inserts = {where[a]: bit_at[a] for a in used}
    out = []
    for i, lab in enumerate(pre):
        out.append(lab)
        if i in inserts:
            k = 2 * inserts[i] + 2
            out.append((chain(1), -1))
            out.extend([(antichain(2), -1)] * k)
            out.append((chain(1), -1))
    return LabelledChain(tuple(out))


# -- family harness -------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyReport:
    sizes: tuple[int, ...]
    isomorphic: tuple[tuple[bool, ...], ...]
    nfree: tuple[bool, ...]
    embeds_in_base: tuple[bool, ...] | None = None

    @property
    def pairwise_noniso(self) -> bool:
        k = len(self.sizes)
        return not any(self.isomorphic[i][j] for i in range(k) for j in range(i + 1, k))

    @property
    def noniso_pairs(self) -> int:
        k = len(self.sizes)
        return sum(not self.isomorphic[i][j] for i in range(k) for j in range(i + 1, k))

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "sizes": list(self.sizes),
            "isomorphic": [list(r) for r in self.isomorphic],
            "nfree": list(self.nfree),
            "pairwise_noniso": self.pairwise_noniso,
            "noniso_pairs": self.noniso_pairs,
            "embeds_in_base": None if self.embeds_in_base is None else list(self.embeds_in_base),
        }


def family_pairwise_noniso(
    windows: Sequence[LabelledChain], base: LabelledChain | None = None, cap: int | None = 64
) -> FamilyReport:
    """All-pairs isomorphism test of the window sums.

    With ``base`` given, also checks that each window sum embeds in the sum
    of that (larger, unmodified) window.
    """
    sums = [sum_labelled_chain(w) for w in windows]
    if cap is not None and any(P.n > cap for P in sums):
        raise SizeError(f"window sums are limited to {cap} points")
    k = len(sums)
    iso = [[i == j for j in range(k)] for i in range(k)]
    for i, j in combinations(range(k), 2):
        iso[i][j] = iso[j][i] = is_isomorphic(sums[i], sums[j], None)
    embeds = None
    if base is not None:
        B = sum_labelled_chain(base)
        if cap is not None and B.n > cap:
            raise SizeError(f"base sum is limited to {cap} points")
        embeds = tuple(find_embedding(P, B, None) is not None for P in sums)
    return FamilyReport(
        tuple(P.n for P in sums),
        tuple(tuple(r) for r in iso),
        tuple(is_nfree(P) for P in sums),
        embeds,
    )


__all__ = [
    "BitPattern",
    "FamilyReport",
    "TruncationWindow",
    "cf_linear_window",
    "cf_window",
    "family_pairwise_noniso",
    "gen_A",
    "gen_B",
    "gen_named",
    "linear_preprocess",
    "periodic_window",
    "window_from_text",
]
