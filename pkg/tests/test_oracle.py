import itertools
import random

import pytest
from hypothesis import given, settings

from nefree.errors import CCGCError, SizeError
from nefree.orders import antichain, chain, dual, has_ccgc, is_nfree, n_poset
from nefree.oracle import (
    automorphisms,
    canonical_key,
    enumerate_posets,
    equimorphic,
    factorial_check,
    find_embedding,
    find_isomorphism,
    induced_index_map,
    is_embedding,
    is_isomorphic,
    iter_embeddings,
    naive_embeddings,
    posets_by_extension,
    posets_by_relation_scan,
    random_nfree_poset,
    random_relabel,
)
from nefree.substitution import direct_sum, linear_sum

from .strategies import nfree_posets, posets

A2 = antichain(2)
AA = linear_sum(A2, A2)


def test_find_embedding_examples():
    assert find_embedding(chain(2), chain(3)) is not None
    assert find_embedding(antichain(2), chain(5)) is None
    assert find_embedding(n_poset(), AA) is None


def test_embedding_cap():
    with pytest.raises(SizeError):
        find_embedding(chain(2), chain(13))
    assert find_embedding(chain(2), chain(13), cap=None) is not None
    assert find_embedding(chain(2), chain(13), cap=20) is not None


def test_embedding_cap_env(monkeypatch):
    monkeypatch.setenv("NEFREE_EMBED_CAP", "none")
    assert find_embedding(chain(2), chain(14)) is not None
    monkeypatch.setenv("NEFREE_EMBED_CAP", "3")
    with pytest.raises(SizeError):
        find_embedding(chain(2), chain(4))


@given(posets(max_n=4), posets(max_n=6))
@settings(max_examples=80, deadline=None)
def test_embeddings_sound_and_complete(P, Q):
    fast = sorted(iter_embeddings(P, Q))
    assert all(is_embedding(f, P, Q) for f in fast)
    assert fast == sorted(naive_embeddings(P, Q))
    first = find_embedding(P, Q)
    assert (first is None) == (not fast)


def test_find_embedding_is_deterministic():
    Q = linear_sum(A2, chain(2), A2)
    assert find_embedding(A2, Q) == find_embedding(A2, Q)


def test_isomorphism_examples():
    f = find_isomorphism(n_poset(), dual(n_poset()))
    assert f is not None and is_embedding(f, n_poset(), dual(n_poset()))
    assert is_isomorphic(chain(3), chain(3))
    assert not is_isomorphic(AA, direct_sum(chain(2), chain(2)))
    assert not equimorphic(AA, direct_sum(chain(2), chain(2)))


@given(posets(max_n=6))
@settings(max_examples=60, deadline=None)
def test_isomorphic_to_random_relabel(P):
    Q, perm = random_relabel(P, random.Random(P.n))
    f = find_isomorphism(P, Q)
    assert f is not None and is_embedding(f, P, Q)
    assert canonical_key(P) == canonical_key(Q)


def test_finite_equimorphy_is_isomorphism_n4():
    classes = list(enumerate_posets(4, up_to_iso=True))
    for P, Q in itertools.combinations_with_replacement(classes, 2):
        assert equimorphic(P, Q) == is_isomorphic(P, Q) == (P is Q)


def test_labeled_counts():
    assert [sum(1 for _ in posets_by_relation_scan(n)) for n in range(1, 5)] == [1, 3, 19, 219]
    assert [sum(1 for _ in posets_by_extension(n)) for n in range(1, 5)] == [1, 3, 19, 219]
    assert sum(1 for _ in enumerate_posets(5)) == 4231


def test_unlabeled_counts_and_orbit_sum():
    counts = []
    for n in range(1, 6):
        classes = list(enumerate_posets(n, up_to_iso=True))
        counts.append(len(classes))
        labeled = sum(1 for _ in posets_by_extension(n))
        assert factorial_check(n, classes) == labeled
    assert counts == [1, 2, 5, 16, 63]


def test_enumeration_caps():
    with pytest.raises(SizeError):
        next(enumerate_posets(7))
    with pytest.raises(SizeError):
        next(enumerate_posets(8, up_to_iso=True))


def test_relation_scan_and_extension_give_same_sets():
    for n in range(1, 5):
        assert set(posets_by_relation_scan(n)) == set(posets_by_extension(n))


def test_automorphisms():
    assert len(list(automorphisms(antichain(3)))) == 6
    assert len(list(automorphisms(chain(4)))) == 1
    assert len(list(automorphisms(AA))) == 4


def test_index_map_examples():
    idx = induced_index_map(tuple(range(4)), [A2, A2], [A2, A2])
    assert idx.map == (0, 1) and idx.chain_isomorphism
    f = find_embedding(AA, linear_sum(A2, A2, A2))
    idx = induced_index_map(f, [A2, A2], [A2, A2, A2])
    assert idx.injective and idx.order_preserving
    assert idx.map == (0, 1)
    with pytest.raises(CCGCError):
        induced_index_map((0, 1), [chain(2)], [chain(2)])


@given(nfree_posets(max_n=8))
@settings(max_examples=40, deadline=None)
def test_random_nfree_generator(P):
    assert is_nfree(P)


def test_index_map_on_isomorphisms(rng):
    done = 0
    while done < 30:
        k = rng.randint(1, 3)
        parts = []
        for _ in range(k):
            s = random_nfree_poset(rng.randint(1, 3), rng)
            if has_ccgc(s):
                parts.append(s)
        if not parts:
            continue
        P = linear_sum(*parts)
        for f in automorphisms(P):
            idx = induced_index_map(f, parts, parts)
            assert idx.chain_isomorphism
        done += 1
