import random
from fractions import Fraction

import pytest

from torsion_stl.enumeration import (EnumerationCapError, canonical_form,
                                     enumerate_small_surfaces, minimum_ratio)
from torsion_stl.lp import build_polyhedron, solve_exact
from torsion_stl.pieces import PieceCollection, commutator_collection, product_collection
from torsion_stl.randomized import random_surfaces
from torsion_stl.surfaces import relabel


def test_product_22_attains_zero():
    coll = product_collection(2, 2)
    surfaces = list(enumerate_small_surfaces(coll, 4))
    assert surfaces
    best = min(S.ratio for S in surfaces)
    assert best == 0 == solve_exact(build_polyhedron(coll)).value
    double = [S for S in surfaces if S.ratio == 0 and S.v == 2]
    assert double and sorted(double[0].piece_counts()) == ["A_1_1", "B_1_1"]


def test_product_23_never_beats_lp():
    coll = product_collection(2, 3)
    lower = solve_exact(build_polyhedron(coll)).value
    ratios = [S.ratio for S in enumerate_small_surfaces(coll, 6) if S.degree]
    assert min(ratios) >= lower == Fraction(1, 4)
    assert min(ratios) == Fraction(1, 4)


def test_outputs_are_valid_and_distinct():
    coll = product_collection(2, 3)
    codes = set()
    for S in enumerate_small_surfaces(coll, 5):
        assert S.is_connected() and S.chi_graph in (0, 1) and S.v <= 5
        code = canonical_form(S)
        assert code not in codes
        codes.add(code)


def test_canonical_form_ignores_labels():
    rng = random.Random(4)
    for S in random_surfaces(9, 60):
        for C in S.split_components():
            order = list(range(C.v))
            rng.shuffle(order)
            assert canonical_form(relabel(C, order)) == canonical_form(C)


def test_empty_collection_and_caps():
    coll = product_collection(2, 2)
    empty = PieceCollection(coll.word, (), "user")
    assert list(enumerate_small_surfaces(empty)) == []
    with pytest.raises(EnumerationCapError):
        list(enumerate_small_surfaces(commutator_collection(3, 3), 6, matching_cap=10))
    with pytest.raises(ValueError):
        list(enumerate_small_surfaces(coll, connected=False))


def test_minimum_ratio_helper():
    coll = product_collection(2, 3)
    ratio, S = minimum_ratio(enumerate_small_surfaces(coll, 4))
    assert S.ratio == ratio
