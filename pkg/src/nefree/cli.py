"""Command-line entry point.

Anywhere a poset is expected the argument may be ``gen:<name>``,
``expr:<text>``, a path to a poset file, or a bare expression.

Exit codes: 0/1 for boolean verdicts (0 otherwise on success), 2 parse
errors, 3 size caps, 4 failed preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import errors
from .classify import classify, canonical_form, sibling_report, sibling_witnesses_disconnected
from .decomposition import decomposition_tree
from .expr import evaluate, layout, parse, to_text
from .generators import (
    BitPattern,
    cf_linear_window,
    cf_window,
    family_pairwise_noniso,
    gen_named,
    window_from_text,
)
from .io import format_poset_file, read_poset_file
from .orders import Poset, comparability_graph, has_ccgc, is_cograph, is_connected, is_nfree
from .oracle import find_embedding, find_isomorphism

EXIT_PARSE = 2
EXIT_SIZE = 3
EXIT_PRECONDITION = 4


def load_poset(arg: str) -> Poset:
    if arg.startswith("gen:"):
        return gen_named(arg[4:])
    if arg.startswith("expr:"):
        return evaluate(parse(arg[5:]))
    path = Path(arg)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        if text.lstrip().startswith(("poset ", "#")) or text.strip() == "":
            return read_poset_file(path)
        return evaluate(parse(text.strip(), base_dir=path.parent))
    return evaluate(parse(arg))


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _cap(args):
    if getattr(args, "cap", None) is None:
        return errors.embed_cap()
    return None if args.cap <= 0 else args.cap


def cmd_check(args) -> int:
    P = load_poset(args.poset)
    checks = {
        "nfree": lambda: is_nfree(P),
        "cograph": lambda: is_cograph(comparability_graph(P)),
        "ccgc": lambda: has_ccgc(P),
        "connected": lambda: is_connected(P),
    }
    wanted = [k for k in checks if getattr(args, k)] or list(checks)
    results = {k: checks[k]() for k in wanted}
    if len(wanted) == 1:
        print(_bool(results[wanted[0]]))
    else:
        for k, v in results.items():
            print(f"{k}: {_bool(v)}")
    return 0 if all(results.values()) else 1


def cmd_decompose(args) -> int:
    T = decomposition_tree(load_poset(args.poset), method=args.method)
    if args.json:
        print(T.to_json())
    elif args.dot:
        print(T.to_dot())
    else:
        print(T.render())
    return 0


def cmd_classify(args) -> int:
    C = classify(load_poset(args.poset))
    print(json.dumps(C.to_dict(), sort_keys=True) if args.json else str(C))
    return 0


def _print_map(f) -> None:
    print("map: " + " ".join(f"{i}->{j}" for i, j in enumerate(f)))


def cmd_embed(args) -> int:
    f = find_embedding(load_poset(args.source), load_poset(args.target), _cap(args))
    print(_bool(f is not None))
    if f is not None:
        _print_map(f)
    return 0 if f is not None else 1


def cmd_iso(args) -> int:
    f = find_isomorphism(load_poset(args.first), load_poset(args.second), _cap(args))
    print(_bool(f is not None))
    if f is not None:
        _print_map(f)
    return 0 if f is not None else 1


def cmd_gen(args) -> int:
    sys.stdout.write(format_poset_file(gen_named(args.name)))
    return 0


def cmd_canon(args) -> int:
    e = canonical_form(load_poset(args.poset))
    print(to_text(e))
    if args.layout:
        print("layout: " + " ".join(map(str, layout(e))))
    return 0


def cmd_siblings(args) -> int:
    P = load_poset(args.poset)
    report = sibling_report(P)
    data = report.to_dict()
    if args.equimorph is not None:
        Q = load_poset(args.equimorph)
        wit = sibling_witnesses_disconnected(P, Q, args.count, _cap(args))
        data["witnesses"] = len(wit)
        data["witness_sizes"] = [W.n for W in wit]
    print(json.dumps(data, sort_keys=True))
    return 0


def cmd_family(args) -> int:
    window = window_from_text(args.base)
    pats = [BitPattern.parse(b) for b in args.bits.split(",") if b.strip()]
    build = cf_linear_window if args.linear else cf_window
    windows = [build(window, f) for f in pats]
    base = window_from_text(args.embed_base).base if args.embed_base else None
    report = family_pairwise_noniso(windows, base, cap=args.max_points)
    data = report.to_dict()
    data["patterns"] = [str(f) for f in pats]
    print(json.dumps(data, sort_keys=True))
    return 0 if report.pairwise_noniso else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nefree", description="Finite NE-free posets: tests, decompositions and constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="boolean properties of a poset")
    c.add_argument("poset")
    for flag in ("nfree", "cograph", "ccgc", "connected"):
        c.add_argument(f"--{flag}", action="store_true")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("decompose", help="decomposition tree")
    d.add_argument("poset")
    fmt = d.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--dot", action="store_true")
    d.add_argument("--method", choices=("auto", "fast", "brute"), default="auto")
    d.set_defaults(func=cmd_decompose)

    k = sub.add_parser("classify", help="singleton, direct sum or linear sum")
    k.add_argument("poset")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_classify)

    for name, a, b, func in (("embed", "source", "target", cmd_embed), ("iso", "first", "second", cmd_iso)):
        e = sub.add_parser(name, help=f"{name} verdict with a witness map")
        e.add_argument(a)
        e.add_argument(b)
        e.add_argument("--cap", type=int, default=None, help="target size cap (0 for none)")
        e.set_defaults(func=func)

    g = sub.add_parser("gen", help="print a named poset as a poset file")
    g.add_argument("name")
    g.set_defaults(func=cmd_gen)

    n = sub.add_parser("canon", help="canonical chain/antichain expression")
    n.add_argument("poset")
    n.add_argument("--layout", action="store_true", help="also print the original point of each position")
    n.set_defaults(func=cmd_canon)

    s = sub.add_parser("siblings", help="sibling report as JSON")
    s.add_argument("poset")
    s.add_argument("--equimorph", help="connected equimorph of a disconnected input")
    s.add_argument("--count", type=int, default=3)
    s.add_argument("--cap", type=int, default=None)
    s.set_defaults(func=cmd_siblings)

    f = sub.add_parser("family", help="pairwise non-isomorphism of a window family")
    f.add_argument("--base", required=True, help="window expression, optionally followed by 'anchors:i,j'")
    f.add_argument("--bits", required=True, help="comma-separated bit patterns")
    f.add_argument("--linear", action="store_true", help="use the linear-sum construction")
    f.add_argument("--embed-base", help="larger unmodified window to embed every sum into")
    f.add_argument("--max-points", type=int, default=64)
    f.set_defaults(func=cmd_family)
    return p


def main(argv=None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except AttributeError:
        pass
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except errors.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except errors.SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (errors.OrderError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
