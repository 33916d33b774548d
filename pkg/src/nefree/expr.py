"""Substitution expressions: AST, text grammar and evaluation.

Grammar (whitespace is ignored)::

    expr  := "c(" INT ")"            chain
           | "a(" INT ")"            antichain
           | "n"                     the N poset
           | "lin(" exprs ")"        linear sum, bottom block first
           | "dir(" exprs ")"        direct sum
           | "q[" ["r="] INTS "](" exprs ")"   labelled-chain sum
           | "sub(" ctx ";" exprs ")"          substitution into a context
           | "poset(" INT [":" I "<" J ("," I "<" J)*] ")"   literal
           | "p:" PATH                         poset file
    ctx   := expr | PATH

Zero-sized chain/antichain atoms are allowed inside ``lin``/``dir`` and are
dropped both when evaluating and when printing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ArityError, ParseError
from .orders import Poset, antichain, chain, from_strict_pairs, n_poset
from .substitution import poset_substitute, q_i_r


class Expr:
    """Base class for expression nodes."""

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Chain(Expr):
    k: int
    points: tuple[int, ...] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Antichain(Expr):
    k: int
    points: tuple[int, ...] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class NAtom(Expr):
    pass


@dataclass(frozen=True)
class Literal(Expr):
    poset: Poset
    source: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Lin(Expr):
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class Dir(Expr):
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class Sub(Expr):
    context: Expr
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class LSum(Expr):
    r: tuple[int, ...]
    parts: tuple[Expr, ...]


Atom = (Chain, Antichain, NAtom, Literal)


def size(e: Expr) -> int:
    if isinstance(e, (Chain, Antichain)):
        return e.k
    if isinstance(e, NAtom):
        return 4
    if isinstance(e, Literal):
        return e.poset.n
    return sum(size(p) for p in e.parts)


def _nonempty(parts):
    return [p for p in parts if size(p) > 0]


def evaluate(e: Expr) -> Poset:
    """Concrete poset; points are laid out atom by atom in left-to-right order."""
    if isinstance(e, Chain):
        return chain(e.k)
    if isinstance(e, Antichain):
        return antichain(e.k)
    if isinstance(e, NAtom):
        return n_poset()
    if isinstance(e, Literal):
        return e.poset
    if isinstance(e, (Lin, Dir)):
        parts = _nonempty(e.parts)
        if not parts:
            raise ArityError("a sum needs at least one non-empty part")
        ctx = chain(len(parts)) if isinstance(e, Lin) else antichain(len(parts))
        return poset_substitute(ctx, [evaluate(p) for p in parts])
    if isinstance(e, Sub):
        return poset_substitute(evaluate(e.context), [evaluate(p) for p in e.parts])
    if isinstance(e, LSum):
        if len(e.r) != len(e.parts):
            raise ArityError(f"{len(e.r)} r-values for {len(e.parts)} parts")
        return poset_substitute(q_i_r(len(e.r), e.r), [evaluate(p) for p in e.parts])
    raise TypeError(f"not an expression: {e!r}")


def atoms(e: Expr) -> Iterator[Expr]:
    """Atoms in evaluation order (empty atoms included)."""
    if isinstance(e, Atom):
        yield e
    elif isinstance(e, Sub):
        for p in e.parts:
            yield from atoms(p)
    else:
        for p in e.parts:
            yield from atoms(p)


def layout(e: Expr) -> tuple[int, ...]:
    """Original points in evaluation order, for expressions whose atoms carry points."""
    out = []
    for a in atoms(e):
        if getattr(a, "points", None) is None:
            raise ValueError("expression atoms carry no point labels")
        out.extend(a.points)
    return tuple(out)


# -- printing ----------------------------------------------------------------------------


def _poset_literal(P: Poset) -> str:
    covers = P.covers()
    if not covers:
        return f"poset({P.n})"
    return f"poset({P.n}:" + ",".join(f"{i}<{j}" for i, j in covers) + ")"


def to_text(e: Expr) -> str:
    if isinstance(e, Chain):
        return f"c({e.k})"
    if isinstance(e, Antichain):
        return f"a({e.k})"
    if isinstance(e, NAtom):
        return "n"
    if isinstance(e, Literal):
        return f"p:{e.source}" if e.source else _poset_literal(e.poset)
    if isinstance(e, (Lin, Dir)):
        parts = _nonempty(e.parts)
        if len(parts) == 1:
            return to_text(parts[0])
        head = "lin" if isinstance(e, Lin) else "dir"
        return f"{head}(" + ",".join(to_text(p) for p in parts) + ")"
    if isinstance(e, Sub):
        return f"sub({to_text(e.context)};" + ",".join(to_text(p) for p in e.parts) + ")"
    if isinstance(e, LSum):
        return "q[" + ",".join(str(v) for v in e.r) + "](" + ",".join(to_text(p) for p in e.parts) + ")"
    raise TypeError(f"not an expression: {e!r}")


# -- parsing -----------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, base_dir: Path | None):
        self.s = text
        self.i = 0
        self.base_dir = base_dir

    def error(self, msg):
        raise ParseError(f"{msg} at offset {self.i} in {self.s!r}")

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, tok: str) -> bool:
        self.ws()
        return self.s.startswith(tok, self.i)

    def eat(self, tok: str):
        if not self.peek(tok):
            self.error(f"expected {tok!r}")
        self.i += len(tok)

    def integer(self) -> int:
        self.ws()
        m = re.compile(r"[+-]?\d+").match(self.s, self.i)
        if not m:
            self.error("expected an integer")
        self.i = m.end()
        return int(m.group())

    def word(self) -> str:
        self.ws()
        m = re.compile(r"[A-Za-z_]+").match(self.s, self.i)
        if not m:
            self.error("expected an expression")
        return m.group()

    def exprs(self) -> tuple[Expr, ...]:
        items = [self.expr()]
        while self.peek(","):
            self.eat(",")
            items.append(self.expr())
        return tuple(items)

    def path(self, stops: str) -> str:
        self.ws()
        j = self.i
        depth = 0
        while j < len(self.s):
            ch = self.s[j]
            if depth == 0 and ch in stops:
                break
            depth += ch == "("
            depth -= ch == ")"
            j += 1
        raw = self.s[self.i : j].strip()
        if not raw:
            self.error("expected a path")
        self.i = j
        return raw

    def load(self, raw: str) -> Literal:
        from .io import read_poset_file

        path = Path(raw)
        if not path.is_absolute() and self.base_dir is not None:
            path = self.base_dir / path
        try:
            return Literal(read_poset_file(path), source=raw)
        except OSError as exc:
            raise ParseError(f"cannot read poset file {raw!r}: {exc}") from exc

    def expr(self) -> Expr:
        self.ws()
        if self.peek("p:"):
            self.eat("p:")
            return self.load(self.path(",);"))
        w = self.word()
        self.i += len(w)
        if w in ("c", "a"):
            self.eat("(")
            k = self.integer()
            self.eat(")")
            if k < 0:
                self.error("sizes must be non-negative")
            return Chain(k) if w == "c" else Antichain(k)
        if w in ("n", "N"):
            return NAtom()
        if w in ("lin", "dir"):
            self.eat("(")
            parts = self.exprs()
            self.eat(")")
            return Lin(parts) if w == "lin" else Dir(parts)
        if w == "q":
            self.eat("[")
            if self.peek("r"):
                self.eat("r")
                self.eat("=")
            r = [self.integer()]
            while self.peek(","):
                self.eat(",")
                r.append(self.integer())
            self.eat("]")
            self.eat("(")
            parts = self.exprs()
            self.eat(")")
            if len(r) != len(parts):
                raise ParseError(f"q[...] has {len(r)} r-values but {len(parts)} parts")
            if any(v not in (-1, 0, 1) for v in r):
                raise ParseError("r-values must lie in {-1, 0, +1}")
            return LSum(tuple(r), parts)
        if w == "sub":
            self.eat("(")
            start = self.i
            try:
                ctx = self.expr()
                self.eat(";")
            except ParseError:
                self.i = start
                ctx = self.load(self.path(";"))
                self.eat(";")
            parts = self.exprs()
            self.eat(")")
            if size(ctx) != len(parts):
                raise ParseError(f"context has {size(ctx)} points but {len(parts)} blocks")
            return Sub(ctx, parts)
        if w == "poset":
            self.eat("(")
            n = self.integer()
            pairs = []
            if self.peek(":"):
                self.eat(":")
                while True:
                    a = self.integer()
                    self.eat("<")
                    b = self.integer()
                    pairs.append((a, b))
                    if not self.peek(","):
                        break
                    self.eat(",")
            self.eat(")")
            try:
                return Literal(from_strict_pairs(n, pairs))
            except (ValueError, IndexError) as exc:
                raise ParseError(str(exc)) from exc
        self.error(f"unknown constructor {w!r}")


def parse(text: str, base_dir: str | Path | None = None) -> Expr:
    """Parse expression text; ``p:`` paths resolve relative to ``base_dir``."""
    p = _Parser(text, Path(base_dir) if base_dir is not None else None)
    e = p.expr()
    p.ws()
    if p.i != len(p.s):
        p.error("trailing input")
    return e
