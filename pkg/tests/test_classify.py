import itertools
import json

import pytest
from hypothesis import given, settings

from nefree.classify import (
    Block,
    canonical_form,
    canonical_tree,
    check_self_embeddings,
    classify,
    form_matches,
    is_leaf_minimal,
    min_block_count,
    sibling_report,
    sibling_witnesses_disconnected,
    smallest_context,
    witness_equimorphy,
)
from nefree.errors import NotCographError, NotNFreeError, StructureError
from nefree.expr import evaluate, layout, parse, to_text
from nefree.orders import Graph, antichain, chain, comparability_graph, has_ccgc, is_connected, n_poset
from nefree.oracle import is_isomorphic
from nefree.substitution import direct_sum, linear_sum

from .strategies import nfree_posets

A2 = antichain(2)


def test_classify_examples():
    C = classify(chain(3))
    assert C.tag == "LinearSum" and C.points == ((0,), (1,), (2,))
    C = classify(direct_sum(chain(2), chain(2)))
    assert C.tag == "DirectSum" and C.parts == (chain(2), chain(2))
    C = classify(linear_sum(A2, A2))
    assert C.tag == "LinearSum" and C.parts == (A2, A2)
    assert all(has_ccgc(p) for p in C.parts)
    assert classify(chain(1)).tag == "Singleton"
    with pytest.raises(NotNFreeError):
        classify(n_poset())


def test_classify_orders_summands_bottom_first():
    P = parse("lin(a(2),c(1),a(3))")
    C = classify(evaluate(P).relabel([5, 3, 0, 1, 4, 2]))
    assert [len(p) for p in C.points] == [2, 1, 3]


@given(nfree_posets(max_n=9))
@settings(max_examples=80, deadline=None)
def test_classify_invariants(P):
    C = classify(P)
    assert sorted(x for p in C.points for x in p) == list(range(P.n))
    if C.tag == "DirectSum":
        assert len(C.parts) >= 2 and all(is_connected(p) for p in C.parts)
    elif C.tag == "LinearSum":
        assert len(C.parts) >= 2 and all(has_ccgc(p) for p in C.parts)
        for lo, hi in zip(C.points, C.points[1:]):
            assert all(P.less(x, y) for x in lo for y in hi)
    else:
        assert P.n == 1


def test_smallest_context_examples():
    K, blocks, part = smallest_context(comparability_graph(linear_sum(A2, A2)))
    assert K.edges() == [(0, 1)]
    assert blocks == (Block("independent", 2), Block("independent", 2))
    assert part == ((0, 1), (2, 3))
    K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
    K, blocks, _ = smallest_context(K4)
    assert K.n == 1 and blocks == (Block("clique", 4),)
    with pytest.raises(NotCographError):
        smallest_context(comparability_graph(n_poset()))


@given(nfree_posets(max_n=10))
@settings(max_examples=80, deadline=None)
def test_smallest_context_is_substitution_and_leaf_minimal(P):
    G = comparability_graph(P)
    K, blocks, part = smallest_context(G)
    assert sorted(x for b in part for x in b) == list(range(P.n))
    owner = {x: i for i, b in enumerate(part) for x in b}
    for x, y in itertools.combinations(range(P.n), 2):
        u, v = owner[x], owner[y]
        if u == v:
            assert bool(G.nbr[x] >> y & 1) == (blocks[u].kind == "clique")
        else:
            assert bool(G.nbr[x] >> y & 1) == bool(K.nbr[u] >> v & 1)
    assert is_leaf_minimal(K, blocks)
    if P.n <= 8:
        assert K.n == min_block_count(G)


def test_canonical_form_examples():
    assert to_text(canonical_form(chain(5))) == "c(5)"
    assert to_text(canonical_form(linear_sum(A2, A2))) == "lin(a(2),a(2))"
    P = linear_sum(chain(1), A2, chain(1))
    assert to_text(canonical_form(P)) == "lin(c(1),a(2),c(1))"
    assert to_text(canonical_form(direct_sum(chain(2), chain(2)))) == "dir(c(2),c(2))"
    with pytest.raises(NotNFreeError):
        canonical_form(n_poset())


def test_canonical_form_keeps_empty_gaps():
    e = canonical_form(linear_sum(A2, A2))
    assert [type(p).__name__ for p in e.parts] == ["Chain", "Antichain", "Chain", "Antichain", "Chain"]
    assert [p.k for p in e.parts[0::2]] == [0, 0, 0]


@given(nfree_posets(max_n=10))
@settings(max_examples=100, deadline=None)
def test_canonical_form_reproduces_poset_exactly(P):
    e = canonical_form(P)
    assert form_matches(P, e, layout(e))
    assert is_isomorphic(evaluate(parse(to_text(e))), P, None)


@given(nfree_posets(max_n=8))
@settings(max_examples=60, deadline=None)
def test_canonical_text_is_relabel_invariant(P):
    import random

    Q = P.relabel(random.Random(P.n).sample(range(P.n), P.n))
    assert to_text(canonical_form(P)) == to_text(canonical_form(Q))


@given(nfree_posets(max_n=6))
@settings(max_examples=50, deadline=None)
def test_self_embeddings_respect_form(P):
    assert check_self_embeddings(P) == []


def test_self_embedding_checker_detects_wrong_form():
    P = linear_sum(A2, chain(1), A2)
    form = canonical_tree(P)
    form.children[1], form.children[3] = form.children[3], form.children[1]
    form.children[1].points, form.children[3].points = (0, 2), (1, 4)
    assert check_self_embeddings(P, form)


def test_sibling_report_examples():
    r = sibling_report(chain(3))
    assert r.verdict == "One" and r.chain_parts == ((0, 1, 2),)
    r = sibling_report(linear_sum(A2, A2))
    assert r.chain_parts == ()
    data = json.loads(r.to_json())
    assert data == {
        "schema": 1,
        "verdict": "One",
        "chain_parts": [],
        "canonical_form": "lin(a(2),a(2))",
        "witnesses": 0,
    }
    with pytest.raises(NotNFreeError):
        sibling_report(n_poset())


def test_sibling_witnesses():
    P = direct_sum(chain(2), chain(2))
    W = sibling_witnesses_disconnected(P, chain(2), 3)
    assert [w.n for w in W] == [2, 3, 4]
    assert W[0] == chain(2)
    assert is_isomorphic(W[1], direct_sum(chain(2), antichain(1)))
    assert is_isomorphic(W[2], direct_sum(chain(2), antichain(2)))
    assert sibling_witnesses_disconnected(P, chain(2), 1) == [chain(2)]
    for w in W:
        assert w.less(0, 1)
    assert witness_equimorphy(P, W) == [False, False, False]
    with pytest.raises(ValueError):
        sibling_witnesses_disconnected(chain(2), chain(2), 2)
    with pytest.raises(ValueError):
        sibling_witnesses_disconnected(P, A2, 2)


def test_structure_error_is_assertion():
    assert issubclass(StructureError, AssertionError)
