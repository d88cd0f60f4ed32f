import itertools
import json

import pytest
from hypothesis import given, strategies as st

from torsion_stl.groups import FiniteGroup
from torsion_stl.pieces import (CollectionCapError, TurnType, all_turn_types, canonical_rotation,
                                commutator_collection, commutator_word, compatible,
                                generic_bounded_collection, make_piece, necklace_count,
                                necklaces, product_collection, product_word, PieceCollection)
from torsion_stl.words import FreeProduct


def _word(L, p=5, q=5):
    # a b a^2 b^2 ... a^L b^L
    G = FreeProduct(FiniteGroup.cyclic(p, "a"), FiniteGroup.cyclic(q, "b"))
    return G.word([s for k in range(1, L + 1) for s in (("A", k), ("B", k))])


@pytest.mark.parametrize("L,count", [(1, 2), (2, 8), (3, 18)])
def test_all_turn_types(L, count):
    w = _word(L)
    assert w.L == L
    types = all_turn_types(w)
    assert len(types) == count == len(set(types))
    assert sum(t.side == "A" for t in types) == L * L


def test_compatible_examples():
    assert compatible(TurnType("A", 1, 2), 2) == TurnType("B", 1, 1)
    assert compatible(TurnType("A", 1, 1), 2) == TurnType("B", 2, 1)
    assert compatible(TurnType("A", 1, 1), 1) == TurnType("B", 1, 1)


@given(st.integers(1, 8), st.sampled_from("AB"), st.data())
def test_compatible_is_an_involution(L, side, data):
    i = data.draw(st.integers(1, L))
    j = data.draw(st.integers(1, L))
    t = TurnType(side, i, j)
    u = compatible(t, L)
    assert u.side != t.side
    assert compatible(u, L) == t


def test_compatible_is_a_bijection():
    L = 4
    a_turns = [TurnType("A", i, j) for i in range(1, L + 1) for j in range(1, L + 1)]
    assert len({compatible(t, L) for t in a_turns}) == L * L


def test_make_piece_examples():
    w = product_word(4, 3)
    assert make_piece("A", (1, 1, 1, 1), w).is_disk
    one = make_piece("A", (1,), w)
    assert not one.is_disk and one.winding == 1
    c = commutator_word(3, 3)
    r1 = make_piece("A", (1, 2), c)
    assert r1.is_disk and r1.chi == 1


@given(st.lists(st.integers(1, 2), min_size=1, max_size=9), st.integers(0, 8))
def test_shape_is_rotation_invariant(arcs, shift):
    w = commutator_word(3, 4)
    rotated = arcs[shift % len(arcs):] + arcs[:shift % len(arcs)]
    for side in "AB":
        p, q = make_piece(side, arcs, w), make_piece(side, rotated, w)
        assert p == q
        assert p.e == len(p.turns()) == len(arcs)


def test_canonical_rotation_contract():
    rot, shift = canonical_rotation((2, 1, 1, 2))
    assert rot == (1, 1, 2, 2)
    arcs = (2, 1, 1, 2)
    assert all(rot[t] == arcs[(t + shift) % 4] for t in range(4))


def test_make_piece_errors():
    w = product_word(2, 2)
    with pytest.raises(ValueError):
        make_piece("A", (), w)
    with pytest.raises(ValueError):
        make_piece("A", (2,), w)
    with pytest.raises(ValueError):
        make_piece("C", (1,), w)


def test_necklaces_match_count():
    for n in range(1, 8):
        for k in (1, 2, 3):
            reps = list(necklaces(n, k))
            assert len(reps) == necklace_count(n, k)
            brute = {canonical_rotation(s)[0]
                     for s in itertools.product(range(1, k + 1), repeat=n)}
            assert set(reps) == brute


def test_generic_collection_examples():
    g = generic_bounded_collection(product_word(2, 2))
    assert len(g.pieces) == 4
    assert set(generic_bounded_collection(product_word(3, 3)).pieces) == \
        set(product_collection(3, 3).pieces)
    big = generic_bounded_collection(commutator_word(2, 2))
    assert set(commutator_collection(2, 2).pieces) <= set(big.pieces)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(2, 5) for q in range(2, 5)])
def test_product_collection_equals_generic(p, q):
    assert generic_bounded_collection(product_word(p, q)).pieces == product_collection(p, q).pieces


def test_generic_collection_cap():
    w = _word(3)
    with pytest.raises(CollectionCapError, match="--override-caps"):
        generic_bounded_collection(w)
    assert len(generic_bounded_collection(w, max_turns=3).pieces) == 2 * (3 + 6 + 11)


def test_commutator_collection_counts_and_shapes():
    c = commutator_collection(4, 3)
    assert len(c.pieces) == 21
    assert len(commutator_collection(2, 2).pieces) == 12
    for piece in c.pieces:
        m = 4 if piece.side == "A" else 3
        ones, twos = piece.count_arc(1), piece.count_arc(2)
        if ones and twos:
            assert piece.is_disk  # R_n, T_n
        else:
            assert piece.is_disk == (max(ones, twos) == m)


def test_product_collection_shapes():
    c = product_collection(4, 3)
    assert len(c.pieces) == 7
    for piece in c.pieces:
        assert piece.is_disk == (piece.e == (4 if piece.side == "A" else 3))
    with pytest.raises(ValueError):
        product_collection(1, 3)


def test_no_single_arc_disks_in_generated_collections():
    colls = [generic_bounded_collection(product_word(p, q)) for p in (2, 3) for q in (2, 4)]
    colls += [commutator_collection(3, 5), generic_bounded_collection(commutator_word(2, 2))]
    for coll in colls:
        for piece in coll.pieces:
            assert not (piece.is_disk and piece.e == 1)
            assert piece.chi - piece.e / 2 <= 1 - piece.e / 2


def test_collection_json_is_ordered_and_round_trips():
    c = commutator_collection(4, 3)
    data = json.loads(c.dumps())
    assert [d["side"] for d in data] == sorted(d["side"] for d in data)
    assert {"side", "arcs", "winding", "shape"} <= set(data[0])
    back = PieceCollection.from_json(data, c.word)
    assert back.pieces == c.pieces
