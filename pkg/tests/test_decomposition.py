import random

import pytest
from hypothesis import given, settings

from nefree.decomposition import (
    DecompTree,
    all_modules,
    check_dense_valuation,
    component_partition,
    decomposition_tree,
    gallai_quotient,
    is_module,
    robust_hull,
    robust_modules,
    strong_modules,
)
from nefree.errors import NotStrongError, SizeError
from nefree.orders import (
    BinaryStructure,
    Graph,
    Poset,
    antichain,
    chain,
    comparability_graph,
    induced,
    n_poset,
)
from nefree.oracle import posets_by_extension, random_poset
from nefree.substitution import direct_sum, linear_sum, poset_substitute

from .strategies import nfree_posets, posets

TWO_CHAINS = direct_sum(chain(2), chain(2))
AA = linear_sum(antichain(2), antichain(2))


def fs(*sets):
    return {frozenset(s) for s in sets}


def test_is_module_examples():
    N = n_poset()
    assert is_module(N, [])
    assert is_module(N, range(4))
    assert all(is_module(N, [x]) for x in range(4))
    assert not is_module(N, [0, 2])
    A3 = antichain(3)
    assert all(is_module(A3, s) for s in ([0, 1], [1, 2], [0, 2]))


def test_all_modules_examples():
    assert len(all_modules(antichain(3))) == 8
    assert len(all_modules(chain(2))) == 4
    assert all_modules(n_poset()).as_set() == fs((), (0,), (1,), (2,), (3,), (0, 1, 2, 3))


def test_all_modules_size_cap():
    with pytest.raises(SizeError):
        all_modules(antichain(21))


def test_strong_modules_examples():
    singles = fs((0,), (1,), (2,))
    assert strong_modules(antichain(3)).as_set() == singles | fs((0, 1, 2))
    assert strong_modules(chain(3)).as_set() == singles | fs((0, 1, 2))
    expect = fs((0,), (1,), (2,), (3,), (0, 1), (2, 3), (0, 1, 2, 3))
    assert strong_modules(TWO_CHAINS).as_set() == expect


def test_robust_hull_examples():
    assert robust_hull(TWO_CHAINS, [2]) == frozenset({2})
    assert robust_hull(TWO_CHAINS, [1, 3]) == frozenset(range(4))
    assert robust_hull(TWO_CHAINS, [0, 1]) == frozenset({0, 1})


def test_robust_modules_examples():
    assert robust_modules(n_poset()).as_set() == fs((0,), (1,), (2,), (3,), range(4))
    assert robust_modules(antichain(3)).as_set() == fs((0,), (1,), (2,), range(3))
    assert robust_modules(TWO_CHAINS).as_set() == strong_modules(TWO_CHAINS).as_set()


@given(posets(max_n=6))
@settings(max_examples=80, deadline=None)
def test_strong_modules_laminar_and_robust(P):
    strong = strong_modules(P).as_set()
    for M in strong:
        assert is_module(P, M)
        for N in strong:
            assert M & N in (frozenset(), M, N)
    assert robust_modules(P).as_set() == strong


def test_component_partition_examples():
    assert component_partition(TWO_CHAINS, range(4)) == [frozenset({0, 1}), frozenset({2, 3})]
    assert component_partition(antichain(3), range(3)) == [frozenset({i}) for i in range(3)]
    assert component_partition(n_poset(), range(4), method="brute") == [frozenset({i}) for i in range(4)]
    with pytest.raises(NotStrongError):
        component_partition(TWO_CHAINS, [0, 2])
    with pytest.raises(NotStrongError):
        component_partition(antichain(3), [0, 1], method="brute")


def test_gallai_quotient_examples():
    Q, t = gallai_quotient(antichain(3), range(3))
    assert str(t) == "Constant(0)" and Q.n == 3
    Q, t = gallai_quotient(chain(3), range(3))
    assert str(t) == "Linear"
    Q, t = gallai_quotient(n_poset(), range(4))
    assert str(t) == "Prime"
    assert Q == BinaryStructure.from_poset(n_poset())


def _as_poset(Q: BinaryStructure) -> Poset:
    return Poset(Q.n, tuple(tuple(Q.d[i][j] == 1 for j in range(Q.n)) for i in range(Q.n)))


@given(posets(max_n=7))
@settings(max_examples=80, deadline=None)
def test_reconstruction_from_quotient(P):
    if P.n < 2:
        return
    classes = component_partition(P, range(P.n))
    Q, _ = gallai_quotient(P, range(P.n))
    blocks = []
    layout = []
    for c in classes:
        sub, idx = induced(P, c)
        blocks.append(sub)
        layout.extend(idx)
    R = poset_substitute(_as_poset(Q), blocks)
    assert all(R.less(i, j) == P.less(layout[i], layout[j]) for i in range(P.n) for j in range(P.n))


def test_tree_examples():
    T = decomposition_tree(chain(3))
    assert T.valuation[0] == "pm1" and len(T.children(0)) == 3
    T = decomposition_tree(AA)
    assert T.valuation[0] == "pm1"
    assert [T.valuation[c] for c in T.children(0)] == ["0", "0"]
    assert sum(T.is_leaf(i) for i in range(len(T.nodes))) == 4
    T = decomposition_tree(antichain(2))
    assert T.valuation == ("0", None, None)


def test_dense_valuation_examples():
    assert check_dense_valuation(decomposition_tree(AA))
    assert check_dense_valuation(decomposition_tree(chain(5)))
    bad = DecompTree(
        3,
        (frozenset({0, 1, 2}), frozenset({0, 1}), frozenset({2}), frozenset({0}), frozenset({1})),
        (-1, 0, 0, 1, 1),
        ("pm1", "pm1", None, None, None),
    )
    assert not check_dense_valuation(bad)


def _tree_signature(T):
    return sorted((sorted(T.nodes[i]), T.valuation[i]) for i in range(len(T.nodes)))


def test_fast_matches_brute_exhaustive_n5():
    for n in range(1, 6):
        for P in posets_by_extension(n):
            assert _tree_signature(decomposition_tree(P, "fast")) == _tree_signature(decomposition_tree(P, "brute"))


def test_fast_matches_brute_random(rng):
    for _ in range(150):
        P = random_poset(rng.randint(6, 9), rng)
        assert _tree_signature(decomposition_tree(P, "fast")) == _tree_signature(decomposition_tree(P, "brute"))
    for _ in range(100):
        n = rng.randint(2, 8)
        G = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5])
        assert _tree_signature(decomposition_tree(G, "fast")) == _tree_signature(decomposition_tree(G, "brute"))


@given(posets(max_n=7))
@settings(max_examples=60, deadline=None)
def test_tree_is_laminar_meet_tree(P):
    T = decomposition_tree(P)
    leaves = [T.nodes[i] for i in range(len(T.nodes)) if T.is_leaf(i)]
    assert sorted(leaves, key=min) == [frozenset({x}) for x in range(P.n)]
    for i, node in enumerate(T.nodes):
        kids = T.children(i)
        if kids:
            assert frozenset().union(*(T.nodes[k] for k in kids)) == node
            x, y = min(T.nodes[kids[0]]), min(T.nodes[kids[1]])
            assert robust_hull(P, [x, y]) == node
        for j, other in enumerate(T.nodes):
            assert node & other in (frozenset(), node, other)


@given(nfree_posets(max_n=9))
@settings(max_examples=60, deadline=None)
def test_nfree_trees_have_no_prime_nodes(P):
    T = decomposition_tree(P)
    assert "prime" not in T.valuation
    assert check_dense_valuation(T)


def test_graph_tree_uses_series_tag():
    G = comparability_graph(chain(3))
    assert decomposition_tree(G).valuation[0] == "pm1"


def test_tree_json_round_trip():
    T = decomposition_tree(AA)
    assert DecompTree.from_dict(T.to_dict()) == T
    assert T.to_json() == decomposition_tree(AA).to_json()
    assert T.to_dict()["schema"] == 1
    assert "digraph" in T.to_dot()


def test_non_poset_structure_uses_brute_route():
    rnd = random.Random(3)
    d = tuple(tuple(0 if i == j else rnd.choice((-1, 0, 1)) for j in range(5)) for i in range(5))
    B = BinaryStructure(5, d)
    T = decomposition_tree(B)
    assert set(T.nodes) <= strong_modules(B).as_set()
    with pytest.raises(ValueError):
        decomposition_tree(B, "fast")
