"""Modules, strong and robust modules, Gallai quotients and decomposition trees.

Two routes compute the strong-module tree:

* ``"brute"`` enumerates all ``2**n`` subsets, keeps the modules, then the
  strong ones.  This is the reference semantics (``n <= 20``).
* ``"fast"`` recurses from the whole domain, splitting a strong module into
  the components of its comparability graph, the components of the
  complement, or (prime case) the classes of "the module closure of
  ``{x, y}`` is proper".  It is only valid for structures that encode a
  poset or a graph, and is differentially tested against ``"brute"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import MODULE_CAP, NotStrongError, SizeError
from .orders import (
    BinaryStructure,
    Graph,
    Poset,
    _mask_components,
    iter_bits,
    to_mask,
)

Structure = Union[BinaryStructure, Poset, Graph]

PARALLEL = "0"
SERIES = "pm1"
PRIME = "prime"


def as_structure(X: Structure) -> BinaryStructure:
    if isinstance(X, BinaryStructure):
        return X
    if isinstance(X, Poset):
        return BinaryStructure.from_poset(X)
    if isinstance(X, Graph):
        return BinaryStructure.from_graph(X)
    raise TypeError(f"cannot view {type(X).__name__} as a binary structure")


def _mask_of(B: BinaryStructure, points) -> int:
    if isinstance(points, int):
        return points
    m = 0
    for p in points:
        if not 0 <= p < B.n:
            raise IndexError(f"point {p} out of range for n={B.n}")
        m |= 1 << p
    return m


def _points(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def _sort_key(s: frozenset[int]):
    return (len(s), sorted(s))


@dataclass(frozen=True)
class ModuleFamily:
    base: BinaryStructure = field(repr=False)
    members: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return frozenset(item) in set(self.members)

    def as_set(self) -> set[frozenset[int]]:
        return set(self.members)


def _family(B: BinaryStructure, masks: Iterable[int]) -> ModuleFamily:
    return ModuleFamily(B, tuple(sorted((_points(m) for m in masks), key=_sort_key)))


# -- module predicate --------------------------------------------------------


def _module_tests(B: BinaryStructure):
    # per point: the classes it splits the rest of the domain into
    return [
        (tuple(B.out_classes[x].values()), tuple(B.in_classes[x].values()))
        for x in range(B.n)
    ]


def _is_module_mask(tests, n: int, m: int) -> bool:
    if m & (m - 1) == 0:
        return True
    outside = ((1 << n) - 1) & ~m
    for x in iter_bits(outside):
        outs, ins = tests[x]
        if not any(m & ~c == 0 for c in outs):
            return False
        if not any(m & ~c == 0 for c in ins):
            return False
    return True


def is_module(B: Structure, M: Iterable[int]) -> bool:
    """Every point outside ``M`` sees all points of ``M`` with the same values."""
    B = as_structure(B)
    return _is_module_mask(_module_tests(B), B.n, _mask_of(B, M))


def _check_cap(B: BinaryStructure):
    if B.n > MODULE_CAP:
        raise SizeError(f"subset enumeration is capped at n={MODULE_CAP}, got n={B.n}")


def _all_module_masks(B: BinaryStructure) -> list[int]:
    _check_cap(B)
    tests = _module_tests(B)
    return [m for m in range(1 << B.n) if _is_module_mask(tests, B.n, m)]


def _strong_masks(B: BinaryStructure) -> list[int]:
    mods = [m for m in _all_module_masks(B) if m]
    strong = []
    for M in mods:
        for N in mods:
            common = M & N
            if common and common != M and common != N:
                break
        else:
            strong.append(M)
    return strong


def all_modules(B: Structure) -> ModuleFamily:
    B = as_structure(B)
    return _family(B, _all_module_masks(B))


def strong_modules(B: Structure) -> ModuleFamily:
    B = as_structure(B)
    return _family(B, _strong_masks(B))


def robust_hull(B: Structure, A: Iterable[int]) -> frozenset[int]:
    """Smallest strong module containing the non-empty set ``A``."""
    B = as_structure(B)
    a = _mask_of(B, A)
    if not a:
        raise ValueError("robust_hull needs a non-empty set")
    hull = (1 << B.n) - 1
    for S in _strong_masks(B):
        if a & ~S == 0 and S & ~hull == 0:
            hull = S
    return _points(hull)


def robust_modules(B: Structure) -> ModuleFamily:
    B = as_structure(B)
    strong = _strong_masks(B)
    found = {1 << x for x in range(B.n)}
    for x in range(B.n):
        for y in range(x + 1, B.n):
            pair = 1 << x | 1 << y
            hull = min((S for S in strong if pair & ~S == 0), key=lambda S: bin(S).count("1"))
            found.add(hull)
    return _family(B, found)


# -- fast split of a strong module ---------------------------------------------


def _module_closure(B: BinaryStructure, seed: int, within: int) -> int:
    """Smallest module of ``B`` containing ``seed``, assuming ``within`` is a module."""
    m = seed
    changed = True
    while changed:
        changed = False
        members = list(iter_bits(m))
        y0 = members[0]
        for z in iter_bits(within & ~m):
            dz = B.d[z]
            v_out = dz[y0]
            v_in = B.d[y0][z]
            for y in members[1:]:
                if dz[y] != v_out or B.d[y][z] != v_in:
                    m |= 1 << z
                    changed = True
                    break
    return m


def _fast_children(B: BinaryStructure, A: int) -> list[int]:
    n = B.n
    nbr = [to_mask(y for y in range(n) if y != x and (B.d[x][y] or B.d[y][x])) for x in range(n)]
    comps = _mask_components(n, nbr, A)
    if len(comps) > 1:
        return comps
    co = [A & ~nbr[x] & ~(1 << x) if A >> x & 1 else 0 for x in range(n)]
    cocomps = _mask_components(n, co, A)
    if len(cocomps) > 1:
        return cocomps
    classes = []
    left = A
    while left:
        x = (left & -left).bit_length() - 1
        cls = 1 << x
        for y in iter_bits(left & ~(1 << x)):
            if _module_closure(B, 1 << x | 1 << y, A) != A:
                cls |= 1 << y
        classes.append(cls)
        left &= ~cls
    return classes


def _brute_children(strong: Sequence[int], A: int) -> list[int]:
    proper = [S for S in strong if S != A and S & ~A == 0]
    return [S for S in proper if not any(S != T and S & ~T == 0 for T in proper)]


def _resolve_method(B: BinaryStructure, method: str) -> str:
    if method == "auto":
        return "fast" if B.kind is not None else "brute"
    if method == "fast" and B.kind is None:
        raise ValueError("the fast route only handles poset- or graph-encoding structures")
    if method not in ("fast", "brute"):
        raise ValueError(f"unknown method {method!r}")
    return method


def _is_strong_mask(B: BinaryStructure, A: int, method: str) -> bool:
    if method == "brute":
        return A in set(_strong_masks(B))
    return A in {to_mask(node) for node in _build_tree(B, method).nodes}


def component_partition(B: Structure, A: Iterable[int], method: str = "auto") -> list[frozenset[int]]:
    """The classes of the strong module ``A``: its maximal proper strong submodules."""
    B = as_structure(B)
    method = _resolve_method(B, method)
    a = _mask_of(B, A)
    if a & (a - 1) == 0:
        raise NotStrongError("component_partition needs a module with at least two points")
    if method == "brute":
        strong = _strong_masks(B)
        if a not in strong:
            raise NotStrongError(f"{sorted(_points(a))} is not a strong module")
        kids = _brute_children(strong, a)
    else:
        if not _is_strong_mask(B, a, method):
            raise NotStrongError(f"{sorted(_points(a))} is not a strong module")
        kids = _fast_children(B, a)
    return [_points(k) for k in sorted(kids, key=lambda k: (k & -k))]


# -- quotients -----------------------------------------------------------------


@dataclass(frozen=True)
class QuotientType:
    tag: str  # "constant" | "linear" | "prime"
    value: int | None = None  # the constant value; None otherwise

    def __str__(self):
        return f"Constant({self.value})" if self.tag == "constant" else self.tag.capitalize()


def quotient_type(Q: BinaryStructure) -> QuotientType:
    """Constant, Linear or Prime, for a structure whose strong modules are trivial."""
    n = Q.n
    values = {Q.d[i][j] for i in range(n) for j in range(n) if i != j}
    if len(values) == 1:
        return QuotientType("constant", values.pop())
    if len(values) == 2:
        alpha, beta = sorted(values)
        paired = all(
            {Q.d[i][j], Q.d[j][i]} == {alpha, beta} for i in range(n) for j in range(i)
        )
        if paired:
            up = [to_mask(j for j in range(n) if j != i and Q.d[i][j] == alpha) for i in range(n)]
            if all(not (up[j] & ~up[i]) for i in range(n) for j in iter_bits(up[i])):
                return QuotientType("linear")
    return QuotientType("prime")


def _quotient_structure(B: BinaryStructure, classes: Sequence[int]) -> BinaryStructure:
    reps = [(c & -c).bit_length() - 1 for c in classes]
    k = len(reps)
    return BinaryStructure(k, tuple(tuple(B.d[reps[i]][reps[j]] if i != j else 0 for j in range(k)) for i in range(k)))


def gallai_quotient(B: Structure, A: Iterable[int], method: str = "auto") -> tuple[BinaryStructure, QuotientType]:
    """Structure induced on the classes of ``A`` (ordered by minimum point) and its type."""
    B = as_structure(B)
    classes = component_partition(B, A, method)
    Q = _quotient_structure(B, [to_mask(c) for c in classes])
    return Q, quotient_type(Q)


def _valuation(t: QuotientType) -> str:
    if t.tag == "prime":
        return PRIME
    if t.tag == "constant" and t.value == 0:
        return PARALLEL
    return SERIES


# -- trees ------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompTree:
    """Robust modules under reverse inclusion; node 0 is the root.

    ``valuation[i]`` is ``None`` for leaves (singletons) and one of
    ``"0"``, ``"pm1"``, ``"prime"`` for internal nodes.  For graphs a
    complete quotient is reported as ``"pm1"`` as well (series node).
    """

    n: int
    nodes: tuple[frozenset[int], ...]
    parent: tuple[int, ...]
    valuation: tuple[str | None, ...]

    def children(self, i: int) -> list[int]:
        return [j for j, p in enumerate(self.parent) if p == i]

    def is_leaf(self, i: int) -> bool:
        return len(self.nodes[i]) == 1

    def internal(self) -> list[int]:
        return [i for i in range(len(self.nodes)) if not self.is_leaf(i)]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "nodes": [sorted(s) for s in self.nodes],
            "parent": list(self.parent),
            "valuation": list(self.valuation),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "DecompTree":
        return cls(
            data["n"],
            tuple(frozenset(s) for s in data["nodes"]),
            tuple(data["parent"]),
            tuple(data["valuation"]),
        )

    def to_dot(self) -> str:
        lines = ["digraph decomposition {"]
        for i, s in enumerate(self.nodes):
            pts = ",".join(map(str, sorted(s)))
            label = pts if self.valuation[i] is None else f"{self.valuation[i]}\\n{{{pts}}}"
            shape = "ellipse" if self.valuation[i] is None else "box"
            lines.append(f'  n{i} [label="{label}", shape={shape}];')
        for i, p in enumerate(self.parent):
            if p >= 0:
                lines.append(f"  n{p} -> n{i};")
        lines.append("}")
        return "\n".join(lines)

    def render(self) -> str:
        out = []

        def walk(i, depth):
            pts = "{" + ",".join(map(str, sorted(self.nodes[i]))) + "}"
            tag = "" if self.valuation[i] is None else f" [{self.valuation[i]}]"
            out.append("  " * depth + pts + tag)
            for j in self.children(i):
                walk(j, depth + 1)

        walk(0, 0)
        return "\n".join(out)


def _build_tree(B: BinaryStructure, method: str) -> DecompTree:
    strong = _strong_masks(B) if method == "brute" else None
    nodes: list[int] = []
    parent: list[int] = []
    valuation: list[str | None] = []
    queue = [((1 << B.n) - 1, -1)]
    while queue:
        A, p = queue.pop(0)
        idx = len(nodes)
        nodes.append(A)
        parent.append(p)
        if A & (A - 1) == 0:
            valuation.append(None)
            continue
        kids = _brute_children(strong, A) if method == "brute" else _fast_children(B, A)
        kids.sort(key=lambda k: k & -k)
        valuation.append(_valuation(quotient_type(_quotient_structure(B, kids))))
        queue.extend((k, idx) for k in kids)
    return DecompTree(B.n, tuple(_points(m) for m in nodes), tuple(parent), tuple(valuation))


def decomposition_tree(B: Structure, method: str = "auto") -> DecompTree:
    """Decomposition tree over the robust modules of ``B``.

    ``method="auto"`` picks the fast route for poset/graph structures and
    the exhaustive route otherwise.
    """
    B = as_structure(B)
    return _build_tree(B, _resolve_method(B, method))


def check_dense_valuation(T: DecompTree) -> bool:
    """Internal parent/child nodes never share a non-prime value."""
    for i, p in enumerate(T.parent):
        if p < 0 or T.valuation[i] is None:
            continue
        v, w = T.valuation[i], T.valuation[p]
        if v == w and v != PRIME:
            return False
    return True
