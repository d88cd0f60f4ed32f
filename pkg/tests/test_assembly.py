import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torsion_stl.assembly import InfeasiblePoint, assemble_from_vector, surface_point
from torsion_stl.lp import brute_force_vertices, build_polyhedron, solve_exact
from torsion_stl.pieces import (commutator_collection, make_collection, product_collection)
from torsion_stl.randomized import random_surfaces


def own_collection(S):
    return make_collection(S.word, ((p.side, p.arcs) for p in S.pieces), "user")


def test_surface_points_are_feasible_with_matching_objective():
    for S in random_surfaces(21, 150):
        coll = own_collection(S)
        lp = build_polyhedron(coll)
        x = surface_point(S, coll)
        assert lp.is_feasible(x)
        assert lp.value(x) == S.ratio  # -chi_o(x) = -chi(S)/n(S)


def test_product_22_vertex_assembles_to_double_edge():
    coll = product_collection(2, 2)
    x = [Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1, 2)]
    S = assemble_from_vector(x, coll)
    assert S.degree == 2 and S.v == 2 and S.e == 2
    assert S.neg_chi == 0 and S.chi_graph == 0 and S.is_connected()


def test_integral_point_uses_scale_one():
    coll = product_collection(3, 3)
    lp = build_polyhedron(coll)
    x = [Fraction(0)] * lp.n
    x[coll.pieces.index(next(p for p in coll.pieces if p.key == "A_1"))] = Fraction(1)
    x[coll.pieces.index(next(p for p in coll.pieces if p.key == "B_1"))] = Fraction(1)
    S = assemble_from_vector(x, coll)
    assert S.degree == 1 and S.v == 2
    assert assemble_from_vector(x, coll, scale_hint=3).degree == 3


def test_commutator_vertices_assemble_at_formula_ratio():
    for p, q in [(3, 3), (4, 5), (5, 5)]:
        coll = commutator_collection(p, q)
        sol = solve_exact(build_polyhedron(coll))
        S = assemble_from_vector(sol.vertex, coll)
        assert S.ratio == sol.value
        assert all(c >= 0 for c in S.component_chi_graph())


def test_infeasible_points_are_rejected():
    coll = product_collection(2, 2)
    with pytest.raises(InfeasiblePoint):
        assemble_from_vector([Fraction(1), 0, 0, 0], coll)
    with pytest.raises(ValueError):
        assemble_from_vector([0, Fraction(1, 2), 0, Fraction(1, 2)], coll, scale_hint=0)


def _feasible_points(seed, count):
    rng = random.Random(seed)
    out = []
    for p, q in [(2, 3), (3, 3), (2, 5), (3, 4)]:
        coll = product_collection(p, q)
        verts = [v for v, _ in brute_force_vertices(build_polyhedron(coll))]
        for _ in range(count):
            # a small convex combination of two vertices keeps the scale modest
            u, v = rng.choice(verts), rng.choice(verts)
            s = Fraction(rng.randint(0, 3), 3)
            out.append(([s * a + (1 - s) * b for a, b in zip(u, v)], coll))
    return out


@given(st.integers(0, 10**6))
def test_assembly_reproduces_random_rational_points(seed):
    for x, coll in _feasible_points(seed, 3):
        lp = build_polyhedron(coll)
        assert lp.is_feasible(x)
        S = assemble_from_vector(x, coll)
        assert surface_point(S, coll) == x
        assert S.ratio == lp.value(x)
