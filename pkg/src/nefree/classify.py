"""Structure of finite NE-free posets.

* :func:`classify` splits a poset into components or linear summands.
* :func:`smallest_context` writes a cograph as a substitution of cliques and
  independent sets into the smallest possible context graph.
* :func:`canonical_form` turns that context into a chain/antichain
  substitution expression for the poset, keeping track of which original
  point sits where.
* :func:`check_self_embeddings` verifies, node by node, how self-embeddings
  move the blocks of such a form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .decomposition import PARALLEL, SERIES, decomposition_tree
from .errors import NotCographError, NotNFreeError, SizeError, StructureError
from .expr import Antichain, Chain, Dir, Expr, Lin, evaluate, to_text
from .orders import (
    Graph,
    Poset,
    antichain,
    comparability_graph,
    components,
    has_ccgc,
    induced,
    is_cograph,
    is_connected,
    is_nfree,
    iter_bits,
)
from .oracle import automorphisms, equimorphic, is_isomorphic
from .substitution import direct_sum

CLIQUE = "clique"
INDEPENDENT = "independent"


def _require_nfree(P: Poset):
    if not is_nfree(P):
        raise NotNFreeError("the poset embeds N")


# -- classification -------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """``tag`` is Singleton, DirectSum or LinearSum; ``points[i]`` are the original
    points of ``parts[i]`` (components sorted by least point, summands bottom first)."""

    tag: str
    parts: tuple[Poset, ...] = ()
    points: tuple[tuple[int, ...], ...] = ()

    def to_dict(self) -> dict:
        return {"schema": 1, "tag": self.tag, "parts": [list(p) for p in self.points]}

    def __str__(self):
        if self.tag == "Singleton":
            return "Singleton"
        inner = ", ".join("{" + ",".join(map(str, p)) + "}" for p in self.points)
        return f"{self.tag}({inner})"


def classify(P: Poset) -> Classification:
    _require_nfree(P)
    if P.n == 1:
        return Classification("Singleton", (P,), ((0,),))
    if not is_connected(P):
        comps = components(P)
        parts = tuple(induced(P, c)[0] for c in comps)
        return Classification("DirectSum", parts, tuple(tuple(c) for c in comps))
    T = decomposition_tree(P)
    if T.valuation[0] != SERIES:
        raise StructureError(f"connected NE-free poset with root value {T.valuation[0]!r}")
    classes = [sorted(T.nodes[c]) for c in T.children(0)]
    classes = sorted(classes, key=lambda c, cs=tuple(classes): sum(P.less(d[0], c[0]) for d in cs))
    parts = tuple(induced(P, c)[0] for c in classes)
    for s in parts:
        if not has_ccgc(s):
            raise StructureError("a linear summand lacks CCGC")
    return Classification("LinearSum", parts, tuple(tuple(c) for c in classes))


# -- smallest context -----------------------------------------------------------------


class Block(NamedTuple):
    kind: str
    size: int

    def __str__(self):
        return f"{'Clique' if self.kind == CLIQUE else 'Independent'}({self.size})"


def _block_kind(G: Graph, mask: int) -> str | None:
    pts = list(iter_bits(mask))
    if len(pts) == 1:
        return CLIQUE
    if all(G.nbr[p] & mask == mask & ~(1 << p) for p in pts):
        return CLIQUE
    if all(G.nbr[p] & mask == 0 for p in pts):
        return INDEPENDENT
    return None


def _graph_module(G: Graph, mask: int) -> bool:
    for v in iter_bits(G.full & ~mask):
        seen = G.nbr[v] & mask
        if seen and seen != mask:
            return False
    return True


def _can_be(G: Graph, mask: int, kind: str) -> bool:
    return mask & (mask - 1) == 0 or _block_kind(G, mask) == kind


def smallest_context(G: Graph) -> tuple[Graph, tuple[Block, ...], tuple[tuple[int, ...], ...]]:
    """Greedy merge of clique/independent twin blocks until none is left.

    Returns the context graph ``K``, the block types and the partition of
    ``G``'s vertices; K-vertex ``i`` stands for ``partition[i]``, and blocks
    are ordered by least vertex.
    """
    if not is_cograph(G):
        raise NotCographError("graph has an induced P4")
    blocks = [1 << v for v in range(G.n)]
    while True:
        merged = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                a, b = blocks[i], blocks[j]
                adjacent = bool(G.nbr[(a & -a).bit_length() - 1] & b)
                kind = CLIQUE if adjacent else INDEPENDENT
                if not (_can_be(G, a, kind) and _can_be(G, b, kind)):
                    continue
                if not _graph_module(G, a | b):
                    continue
                blocks[i] = a | b
                del blocks[j]
                merged = True
                break
            if merged:
                break
        if not merged:
            break
    blocks.sort(key=lambda m: m & -m)
    reps = [(m & -m).bit_length() - 1 for m in blocks]
    K = Graph.from_edges(
        len(blocks),
        [(i, j) for i in range(len(blocks)) for j in range(i + 1, len(blocks)) if G.nbr[reps[i]] >> reps[j] & 1],
    )
    kinds = tuple(Block(_block_kind(G, m), m.bit_count()) for m in blocks)
    return K, kinds, tuple(tuple(iter_bits(m)) for m in blocks)


def min_block_count(G: Graph) -> int:
    """Fewest blocks in any partition of ``G`` into clique/independent modules.

    Exhaustive DP over vertex subsets; independent of the greedy merge.
    """
    if G.n > 16:
        raise SizeError("exhaustive partition search is limited to 16 vertices")
    full = G.full
    ok = [False] * (full + 1)
    for m in range(1, full + 1):
        ok[m] = _block_kind(G, m) is not None and _graph_module(G, m)
    best = [0] + [G.n + 1] * full
    for m in range(1, full + 1):
        low = m & -m
        rest = m & ~low
        sub = rest
        while True:
            blk = sub | low
            if ok[blk] and best[m & ~blk] + 1 < best[m]:
                best[m] = best[m & ~blk] + 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[full]


def mergeable_pairs(K: Graph, blocks: Sequence[Block]) -> list[tuple[int, int]]:
    """Two-element modules of ``K`` that violate edge minimality."""
    out = []
    for u in range(K.n):
        for v in range(u + 1, K.n):
            adjacent = bool(K.nbr[u] >> v & 1)
            want = CLIQUE if adjacent else INDEPENDENT
            if not all(b.size == 1 or b.kind == want for b in (blocks[u], blocks[v])):
                continue
            if _graph_module(K, 1 << u | 1 << v):
                out.append((u, v))
    return out


def is_leaf_minimal(K: Graph, blocks: Sequence[Block]) -> bool:
    return not mergeable_pairs(K, blocks)


# -- canonical chain/antichain form ---------------------------------------------------


@dataclass
class FormNode:
    """Node of a canonical form.

    ``kind`` is chain, antichain, dir or lin.  Leaves keep their points in
    poset order.  A lin node's children alternate gap chain, summand, gap
    chain, ..., gap chain; ``block`` lists the points of the split chain
    block when there is one.
    """

    kind: str
    points: tuple[int, ...]
    children: list["FormNode"] = field(default_factory=list)
    block: tuple[int, ...] = ()

    def expr(self) -> Expr:
        if self.kind == "chain":
            return Chain(len(self.points), self.points)
        if self.kind == "antichain":
            return Antichain(len(self.points), self.points)
        parts = tuple(c.expr() for c in self.children)
        return Dir(parts) if self.kind == "dir" else Lin(parts)

    def gaps(self) -> list["FormNode"]:
        return self.children[0::2] if self.kind == "lin" else []

    def summands(self) -> list["FormNode"]:
        return self.children[1::2] if self.kind == "lin" else []

    def blocks(self) -> list[tuple[int, ...]]:
        """Context blocks below this node, the split chain counted once."""
        if self.kind in ("chain", "antichain"):
            return [self.points] if self.points else []
        out = []
        if self.kind == "lin":
            if self.block:
                out.append(self.block)
            kids = self.summands()
        else:
            kids = self.children
        for c in kids:
            out.extend(c.blocks())
        return out

    def walk(self) -> Iterator["FormNode"]:
        yield self
        for c in self.children:
            yield from c.walk()


def _leaf(P: Poset, pts: Sequence[int], kind: str) -> FormNode:
    pts = sorted(pts, key=lambda x: (P.down[x].bit_count(), x))
    return FormNode("chain" if kind == CLIQUE else "antichain", tuple(pts))


def _build_form(P: Poset, T, node: int, parts, kinds) -> FormNode:
    def pts_of(i):
        return sorted(p for v in T.nodes[i] for p in parts[v])

    if T.is_leaf(node):
        (v,) = T.nodes[node]
        return _leaf(P, parts[v], kinds[v].kind)
    kids = T.children(node)
    if T.valuation[node] == PARALLEL:
        forms = [_build_form(P, T, c, parts, kinds) for c in kids]
        forms.sort(key=lambda f: (to_text(f.expr()), min(f.points)))
        return FormNode("dir", tuple(pts_of(node)), forms)
    if T.valuation[node] != SERIES:
        raise StructureError("prime node in the context tree of a cograph")
    chain_leaf = None
    summands = []
    for c in kids:
        if T.is_leaf(c):
            (v,) = T.nodes[c]
            if kinds[v].kind == CLIQUE:
                if chain_leaf is not None:
                    raise StructureError("two chain leaves under one series node")
                chain_leaf = list(parts[v])
                continue
        summands.append(_build_form(P, T, c, parts, kinds))
    for s in summands:
        if is_connected(induced(P, s.points)[0]):
            raise StructureError("series summand is not disconnected")
    summands = sorted(summands, key=lambda s, ss=tuple(summands): sum(P.less(t.points[0], s.points[0]) for t in ss))
    gaps: list[list[int]] = [[] for _ in range(len(summands) + 1)]
    for x in chain_leaf or []:
        below = sum(all(P.less(y, x) for y in s.points) for s in summands)
        gaps[below].append(x)
    children = []
    for g, s in zip(gaps, summands + [None]):
        children.append(_leaf(P, g, CLIQUE))
        if s is not None:
            children.append(s)
    block = tuple(_leaf(P, chain_leaf, CLIQUE).points) if chain_leaf else ()
    return FormNode("lin", tuple(pts_of(node)), children, block)


def form_matches(P: Poset, e: Expr, layout_: Sequence[int]) -> bool:
    """True when ``evaluate(e)`` with point k renamed ``layout_[k]`` is exactly ``P``."""
    E = evaluate(e)
    if E.n != P.n or sorted(layout_) != list(range(P.n)):
        return False
    return all(E.less(i, j) == P.less(layout_[i], layout_[j]) for i in range(E.n) for j in range(E.n))


def canonical_tree(P: Poset) -> FormNode:
    _require_nfree(P)
    K, kinds, parts = smallest_context(comparability_graph(P))
    T = decomposition_tree(K)
    form = _build_form(P, T, 0, parts, kinds)
    e = form.expr()
    lay = [p for n in form.walk() if n.kind in ("chain", "antichain") for p in n.points]
    if not form_matches(P, e, lay):
        raise StructureError("canonical form does not reproduce the poset")
    return form


def canonical_form(P: Poset) -> Expr:
    """Chain/antichain substitution expression for an NE-free poset.

    Atoms carry the original points they cover (``expr.layout``), so
    relabelling ``evaluate(expr)`` by the layout gives back ``P`` exactly.
    """
    return canonical_tree(P).expr()


# -- self-embedding checks ------------------------------------------------------------


def _blocks_ok(h: dict, blocks: Sequence[Sequence[int]]) -> bool:
    owner = {p: i for i, b in enumerate(blocks) for p in b}
    seen = set()
    for b in blocks:
        targets = {owner[h[p]] for p in b}
        if len(targets) != 1:
            return False
        t = targets.pop()
        if t in seen:
            return False
        seen.add(t)
    return True


def _node_ok(h: dict, node: FormNode) -> bool:
    if node.kind == "dir":
        owner = {p: i for i, c in enumerate(node.children) for p in c.points}
        image = []
        for i, c in enumerate(node.children):
            targets = {owner[h[p]] for p in c.points}
            if len(targets) != 1:
                return False
            t = targets.pop()
            if c.kind == "antichain" and len(c.points) > 1 and t != i:
                return False
            image.append(t)
        return sorted(image) == list(range(len(node.children)))
    if node.kind == "lin":
        for c in node.children:
            pts = set(c.points)
            if any(h[p] not in pts for p in c.points):
                return False
    return True


def check_self_embeddings(P: Poset, form: FormNode | None = None, cap=None) -> list[str]:
    """Run every self-embedding of every internal node's poset against the form.

    Checks that blocks map into distinct blocks, that a direct-sum node
    permutes its children and fixes its antichain child, and that a
    linear node maps each summand and each gap chain into itself.  Returns
    a list of failure descriptions (empty when all hold).
    """
    if form is None:
        form = canonical_tree(P)
    failures = []
    for node in form.walk():
        if node.kind not in ("dir", "lin"):
            continue
        sub, idx = induced(P, node.points)
        blocks = node.blocks()
        for f in automorphisms(sub, cap):
            h = {idx[k]: idx[f[k]] for k in range(sub.n)}
            if not _blocks_ok(h, blocks):
                failures.append(f"{node.kind} node {node.points}: blocks not mapped injectively by {f}")
            if not _node_ok(h, node):
                failures.append(f"{node.kind} node {node.points}: children not preserved by {f}")
    return failures


# -- sibling reporting ----------------------------------------------------------------


@dataclass(frozen=True)
class SiblingReport:
    """Sibling verdict for a finite NE-free poset.

    A finite poset is equimorphic only to its isomorphic copies, so the
    verdict is always ``One``.  ``chain_parts`` lists the chain atoms of the
    canonical form: were these chains inflated to infinite ones, their own
    sibling numbers would decide the count.
    """

    verdict: str
    chain_parts: tuple[tuple[int, ...], ...]
    canonical_form: Expr
    witnesses: tuple[Poset, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "verdict": self.verdict,
            "chain_parts": [{"size": len(c), "points": list(c)} for c in self.chain_parts],
            "canonical_form": to_text(self.canonical_form),
            "witnesses": 0 if self.witnesses is None else len(self.witnesses),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def sibling_report(P: Poset) -> SiblingReport:
    form = canonical_tree(P)
    chains = tuple(n.points for n in form.walk() if n.kind == "chain" and n.points)
    return SiblingReport("One", chains, form.expr())


def sibling_witnesses_disconnected(P: Poset, Q: Poset, k: int, cap=None) -> list[Poset]:
    """``[Q ⊕ K̄_i for 0 <= i < k]``, checked pairwise non-isomorphic.

    The caller vouches that ``Q`` is a connected equimorph of the
    disconnected ``P``; equimorphy of the candidates is not certified here
    (see :func:`witness_equimorphy`).
    """
    if k < 1:
        raise ValueError("k must be positive")
    if not is_connected(Q):
        raise ValueError("Q must be connected")
    if is_connected(P):
        raise ValueError("P must be disconnected")
    if cap is not None and Q.n + k - 1 > cap:
        raise SizeError(f"candidates exceed {cap} points")
    out = [Q if i == 0 else direct_sum(Q, antichain(i)) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if is_isomorphic(out[i], out[j], cap):
                raise StructureError(f"candidates {i} and {j} are isomorphic")
    return out


def witness_equimorphy(P: Poset, witnesses: Sequence[Poset], cap=None) -> list[bool | None]:
    """Equimorphy of each candidate with ``P``; ``None`` where the size cap blocks the check."""
    out = []
    for W in witnesses:
        try:
            out.append(equimorphic(P, W, cap))
        except SizeError:
            out.append(None)
    return out


__all__ = [
    "Block",
    "Classification",
    "FormNode",
    "SiblingReport",
    "canonical_form",
    "canonical_tree",
    "check_self_embeddings",
    "classify",
    "form_matches",
    "is_leaf_minimal",
    "mergeable_pairs",
    "min_block_count",
    "sibling_report",
    "sibling_witnesses_disconnected",
    "smallest_context",
    "witness_equimorphy",
]
