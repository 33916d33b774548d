import random

import pytest
from hypothesis import given, settings, strategies as st

from nefree.errors import ArityError, ParseError
from nefree.expr import (
    Antichain,
    Chain,
    Dir,
    Lin,
    Literal,
    LSum,
    NAtom,
    Sub,
    evaluate,
    parse,
    size,
    to_text,
)
from nefree.io import format_poset_file, parse_poset_file, read_poset_file, write_poset_file
from nefree.orders import antichain, chain, n_poset
from nefree.oracle import random_poset
from nefree.substitution import direct_sum, linear_sum, poset_substitute, q_i_r

from .strategies import posets


def test_atoms():
    assert evaluate(parse("c(3)")) == chain(3)
    assert evaluate(parse("a(2)")) == antichain(2)
    assert evaluate(parse("n")) == n_poset()
    assert evaluate(parse(" lin( a(2) , a(2) ) ")) == linear_sum(antichain(2), antichain(2))
    assert evaluate(parse("dir(c(2),c(2))")) == direct_sum(chain(2), chain(2))


def test_labelled_sum_forms():
    for text in ("q[0,-1,1](c(1),a(2),c(2))", "q[r=0,-1,1](c(1),a(2),c(2))"):
        e = parse(text)
        assert isinstance(e, LSum) and e.r == (0, -1, 1)
        expect = poset_substitute(q_i_r(3, (0, -1, 1)), [chain(1), antichain(2), chain(2)])
        assert evaluate(e) == expect
    assert to_text(parse("q[r=0,-1](c(1),c(1))")) == "q[0,-1](c(1),c(1))"


def test_sub_and_literals(tmp_path):
    e = parse("sub(poset(3:0<1,2<1); c(1), a(2), c(2))")
    assert isinstance(e, Sub)
    ctx = evaluate(e.context)
    assert evaluate(e) == poset_substitute(ctx, [chain(1), antichain(2), chain(2)])
    path = tmp_path / "ctx.poset"
    write_poset_file(path, chain(2))
    e = parse(f"sub({path}; a(2), a(2))")
    assert evaluate(e) == linear_sum(antichain(2), antichain(2))
    e = parse("dir(c(3), p:ctx.poset)", base_dir=tmp_path)
    assert evaluate(e) == direct_sum(chain(3), chain(2))
    assert to_text(e) == "dir(c(3),p:ctx.poset)"


def test_zero_atoms_are_pruned():
    e = parse("lin(c(0),a(2),c(0),a(2),c(0))")
    assert to_text(e) == "lin(a(2),a(2))"
    assert evaluate(e) == linear_sum(antichain(2), antichain(2))
    assert to_text(parse("lin(c(0),c(3))")) == "c(3)"
    with pytest.raises(ArityError):
        evaluate(parse("lin(c(0),a(0))"))


@pytest.mark.parametrize(
    "bad",
    ["", "c(", "c(-1)", "x(2)", "lin()", "q[0](c(1),c(1))", "q[2](c(1))", "sub(c(2); c(1))", "c(2) c(1)",
     "poset(2:0<1,1<0)", "poset(2:0<5)", "p:/does/not/exist.poset"],
)
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


@st.composite
def exprs(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        kind = draw(st.sampled_from(["c", "a", "n", "lit"]))
        if kind == "c":
            return Chain(draw(st.integers(1, 3)))
        if kind == "a":
            return Antichain(draw(st.integers(1, 3)))
        if kind == "n":
            return NAtom()
        return Literal(random_poset(draw(st.integers(1, 4)), random.Random(draw(st.integers(0, 999)))))
    kind = draw(st.sampled_from(["lin", "dir", "q", "sub"]))
    parts = tuple(draw(st.lists(exprs(depth=depth - 1), min_size=2, max_size=3)))
    if kind == "lin":
        return Lin(parts)
    if kind == "dir":
        return Dir(parts)
    if kind == "q":
        return LSum(tuple(draw(st.sampled_from((-1, 0, 1))) for _ in parts), parts)
    return Sub(Literal(random_poset(len(parts), random.Random(draw(st.integers(0, 999))))), parts)


@given(exprs())
@settings(max_examples=100, deadline=None)
def test_text_round_trip(e):
    text = to_text(e)
    back = parse(text)
    assert back == e
    assert to_text(back) == text
    assert evaluate(back) == evaluate(e)
    assert size(e) == evaluate(e).n


def test_poset_file_format():
    text = "# the N poset\nposet 4\n0 1\n2 1   # comment\n\n2 3\n"
    P = parse_poset_file(text)
    assert P == n_poset()
    assert format_poset_file(P) == "poset 4\n0 1\n2 1\n2 3\n"


def test_poset_file_closes_pairs():
    P = parse_poset_file("poset 3\n0 1\n1 2\n0 2\n")
    assert format_poset_file(P) == "poset 3\n0 1\n1 2\n"


@pytest.mark.parametrize(
    "bad", ["", "0 1\n", "poset x\n", "poset 2\n0\n", "poset 2\n0 a\n", "poset 2\n0 1\n1 0\n", "poset 2\n0 3\n"]
)
def test_poset_file_errors(bad):
    with pytest.raises(ParseError):
        parse_poset_file(bad)


@given(posets(max_n=8))
@settings(max_examples=80, deadline=None)
def test_poset_file_round_trip(P):
    text = format_poset_file(P)
    assert parse_poset_file(text) == P
    assert format_poset_file(parse_poset_file(text)) == text


def test_read_write(tmp_path):
    path = tmp_path / "p.poset"
    write_poset_file(path, n_poset())
    assert read_poset_file(path) == n_poset()
