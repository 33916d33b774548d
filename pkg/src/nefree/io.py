"""Plain-text poset files.

::

    # comment
    poset 4
    0 1
    2 1
    2 3

Each pair line ``i j`` means ``i < j``; pairs are closed transitively.
Writers emit only covering pairs.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .orders import Poset, from_strict_pairs


def parse_poset_file(text: str) -> Poset:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "poset":
                raise ParseError(f"line {lineno}: expected 'poset <n>'")
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad point count {fields[1]!r}") from None
            continue
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected '<i> <j>'")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer point") from None
    if n is None:
        raise ParseError("missing 'poset <n>' header")
    try:
        return from_strict_pairs(n, pairs)
    except (ValueError, IndexError) as exc:
        raise ParseError(str(exc)) from exc


def format_poset_file(P: Poset) -> str:
    lines = [f"poset {P.n}"]
    lines.extend(f"{i} {j}" for i, j in P.covers())
    return "\n".join(lines) + "\n"


def read_poset_file(path: str | Path) -> Poset:
    return parse_poset_file(Path(path).read_text(encoding="utf-8"))


def write_poset_file(path: str | Path, P: Poset) -> None:
    Path(path).write_text(format_poset_file(P), encoding="utf-8")
