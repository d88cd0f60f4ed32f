import pytest
from hypothesis import given, strategies as st

from torsion_stl.groups import FiniteGroup, symmetric_group_s3
from torsion_stl.words import (FreeProduct, FreeProductWord, TorsionFactorization,
                               WordSyntaxError, parse_word)


def z(p, q):
    return FreeProduct(FiniteGroup.cyclic(p, "a"), FiniteGroup.cyclic(q, "b"))


G33 = z(3, 3)
G45 = z(4, 5)


def raw_words(G, max_size=12):
    return st.lists(st.one_of(st.tuples(st.just("A"), st.integers(0, G.A.order - 1)),
                              st.tuples(st.just("B"), st.integers(0, G.B.order - 1))),
                    max_size=max_size).map(tuple)


def test_free_reduce_examples():
    assert G33.free_reduce([("A", 1), ("A", 2)]) == ()
    assert G33.free_reduce([]) == ()
    w = (("A", 1), ("B", 1), ("A", 2), ("B", 2))
    assert G33.free_reduce(w) == w
    assert G33.word(w).L == 2


def test_free_reduce_rejects_bad_index():
    with pytest.raises(IndexError):
        G33.free_reduce([("A", 3)])


@given(raw_words(G45))
def test_free_reduce_idempotent(w):
    once = G45.free_reduce(w)
    assert G45.free_reduce(once) == once


@given(raw_words(G45))
def test_word_times_inverse_is_identity(w):
    assert G45.free_reduce(tuple(w) + G45.inverse(w)) == ()


def test_cyclically_reduce_examples():
    conj, core = G33.cyclically_reduce([("B", 1), ("A", 1), ("B", 2)])
    assert conj == (("B", 1),) and core == ("A", 1)
    comm = (("A", 1), ("B", 1), ("A", 2), ("B", 2))
    conj, core = G33.cyclically_reduce(comm)
    assert conj == () and core.syllables == comm
    G = z(3, 5)
    raw = (("B", 1), ("A", 1), ("B", 2))
    conj, core = G.cyclically_reduce(raw)
    assert core.syllables == (("A", 1), ("B", 3))
    assert G.free_reduce(G.conjugate(conj, core.syllables)) == G.free_reduce(raw)


@given(raw_words(G45))
def test_cyclically_reduce_reconstructs(w):
    conj, core = G45.cyclically_reduce(w)
    if core is None:
        body = ()
    elif isinstance(core, FreeProductWord):
        body = core.syllables
        assert body[0][0] == "A" and body[-1][0] == "B"
    else:
        body = (core,)
    assert G45.free_reduce(G45.conjugate(conj, body)) == G45.free_reduce(w)


def test_canonical_rotation_is_least():
    G = z(5, 5)
    w1 = G.word([("A", 3), ("B", 1), ("A", 1), ("B", 2)])
    w2 = G.word([("A", 1), ("B", 2), ("A", 3), ("B", 1)])
    assert w1.syllables == w2.syllables == (("A", 1), ("B", 2), ("A", 3), ("B", 1))


def test_word_invariants():
    with pytest.raises(ValueError):
        FreeProductWord(G33, (("B", 1), ("A", 1)))
    with pytest.raises(ValueError):
        FreeProductWord(G33, (("A", 0), ("B", 1)))
    with pytest.raises(ValueError):
        G33.word([("A", 1)])


def test_verify_factorization():
    G = z(2, 2)
    g = G.word([("A", 1), ("B", 1)])
    assert G.verify_factorization(g, TorsionFactorization(1, (((), ("A", 1)), ((), ("B", 1)))))
    assert not G.verify_factorization(g, TorsionFactorization(1, (((), ("A", 1)),)))
    # (ab)^2 = (a b a^-1) b since a^2 = 1
    f = TorsionFactorization(2, (((("A", 1),), ("B", 1)), ((), ("B", 1))))
    assert G.verify_factorization(g, f)
    f = TorsionFactorization(2, (((), ("B", 1)), ((("A", 1),), ("B", 1))))
    assert not G.verify_factorization(g, f)
    assert not G.verify_factorization(g, TorsionFactorization(1, (((), ("A", 0)),)))


def test_factorization_json_round_trip():
    f = TorsionFactorization(2, (((("A", 1),), ("B", 1)), ((), ("A", 1))))
    assert TorsionFactorization.from_json(f.to_json(z(2, 2))) == f


def test_parse_word():
    assert parse_word("a b a^-1 b^-1", G33) == (("A", 1), ("B", 1), ("A", 2), ("B", 2))
    assert parse_word("  a^3 b ", G45) == (("A", 3), ("B", 1))
    S = FreeProduct(symmetric_group_s3(), symmetric_group_s3())
    assert parse_word("A:1 B:3^2", S) == (("A", 1), ("B", 4))


@pytest.mark.parametrize("text,col", [("a c", 3), ("a b^x", 3), ("A:9", 1), ("ab", 1)])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text, G33)
    assert info.value.column == col
    assert info.value.line == 1


def test_generators_only_name_cyclic_factors():
    S = FreeProduct(symmetric_group_s3(), FiniteGroup.cyclic(3))
    with pytest.raises(WordSyntaxError):
        parse_word("a b", S)
