"""Acceptance criteria, each run at its stated tolerance."""
import random
import time
from fractions import Fraction

from torsion_stl.assembly import assemble_from_vector, surface_point
from torsion_stl.certify import compute_stl, extract_factorization
from torsion_stl.constructions import (approximate_by_tree, certificate_commutator,
                                       certificate_product, commutator_formula, product_formula)
from torsion_stl.enumeration import enumerate_small_surfaces
from torsion_stl.groups import symmetric_group_s3
from torsion_stl.lp import (brute_force_vertices, build_polyhedron, solve_exact,
                            verify_certificate)
from torsion_stl.pieces import (commutator_collection, commutator_word, make_collection,
                                product_collection, product_word)
from torsion_stl.randomized import random_surfaces
from torsion_stl.rewrite import reduce_with_trace
from torsion_stl.surfaces import euler_characteristic, kappa
from torsion_stl.words import FreeProduct

COMMUTATOR_PAIRS = [(p, q) for p in range(2, 6) for q in range(2, 6)]
PRODUCT_PAIRS = [(p, q) for p in range(2, 7) for q in range(p, 7)]


def _timed_stl(word):
    t = time.perf_counter()
    r = compute_stl(word.syllables, word.groups)
    return r, time.perf_counter() - t


def test_criterion_1_commutator_formula(criterion):
    bad, slowest = [], 0.0
    for p, q in COMMUTATOR_PAIRS:
        r, dt = _timed_stl(commutator_word(p, q))
        slowest = max(slowest, dt)
        expected = 1 - Fraction(1, min(p, q) - 1)
        if not (r.exact and r.value == expected and dt < 10):
            bad.append((p, q, r.value, round(dt, 3)))
    criterion(1, not bad, f"{len(COMMUTATOR_PAIRS)} pairs, slowest {slowest:.3f}s, failures {bad}")
    assert not bad


def test_criterion_2_product_formula(criterion):
    bad, slowest = [], 0.0
    for p, q in PRODUCT_PAIRS:
        r, dt = _timed_stl(product_word(p, q))
        slowest = max(slowest, dt)
        expected = 1 - Fraction(q, p * (q - 1))
        if not (r.exact and r.value == expected and dt < 5):
            bad.append((p, q, r.value, round(dt, 3)))
    criterion(2, not bad, f"{len(PRODUCT_PAIRS)} pairs, slowest {slowest:.3f}s, failures {bad}")
    assert not bad


def test_criterion_3_certificates(criterion):
    C = certificate_commutator(5, 5)
    P = certificate_product(4, 5)
    checks = {
        "commutator n=8": C.degree == 8,
        "commutator -chi=6": C.neg_chi == 6 == -euler_characteristic(C),
        "commutator connected": C.is_connected(),
        "commutator chi(Gamma)=0": C.chi_graph == 0,
        "commutator ratio": C.ratio == commutator_formula(5, 5),
        "product n=16": P.degree == 16,
        "product -chi=11": P.neg_chi == 11 == -euler_characteristic(P),
        "product v=12": P.v == 12,
        "product e=16": P.e == 16,
        "product ratio": P.ratio == product_formula(4, 5),
    }
    failed = [k for k, ok in checks.items() if not ok]
    criterion(3, not failed, f"failed sub-checks {failed} (product v={P.v})")
    assert not failed, f"failed sub-checks: {failed}; product certificate has v={P.v}"


def test_criterion_4_isometric_embedding(criterion):
    S3 = symmetric_group_s3()
    G = FreeProduct(S3, S3)
    # (12) has order 2, (123) has order 3
    r = compute_stl((("A", 1), ("B", 3)), G)
    cyc = compute_stl(product_word(2, 3).syllables, product_word(2, 3).groups)
    ok = r.exact and cyc.exact and r.value == cyc.value == Fraction(1, 4)
    criterion(4, ok, f"S3 value {r.value}, cyclic value {cyc.value}")
    assert ok


def test_criterion_5_approximation(criterion):
    S0 = certificate_commutator(3, 3)
    seq = [approximate_by_tree(S0, k) for k in range(1, 5)]
    ratios = [T.ratio for T in seq]
    shape_ok = all(T.is_connected() and T.chi_graph == 1 for T in seq)
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    close = abs(ratios[-1] - Fraction(1, 2)) <= Fraction(1, 5)
    f = extract_factorization(seq[0])
    verified = S0.word.groups.verify_factorization(S0.word, f)
    ok = shape_ok and decreasing and close and verified
    criterion(5, ok, f"ratios {[str(r) for r in ratios]}, factorization of length {len(f.factors)} "
                     f"verified={verified}")
    assert ok


def test_criterion_6_rewrite_properties(criterion):
    surfaces = random_surfaces(2024, 500)
    bad = []
    steps_total = 0
    for n, S in enumerate(surfaces):
        comps, steps = reduce_with_trace(S)
        steps_total += len(steps)
        for st in steps:
            drop = st.kappa_before - st.kappa_after
            if drop not in ((1, 2) if st.kind == "split" else (1,)):
                bad.append((n, st.kind, drop))
        if len(steps) > kappa(S):
            bad.append((n, "steps", len(steps)))
        if min(C.ratio for C in comps if C.degree) > S.ratio:
            bad.append((n, "ratio"))
    criterion(6, not bad and len(surfaces) >= 500,
              f"{len(surfaces)} surfaces, {steps_total} rewrite steps, violations {bad[:5]}")
    assert not bad


def _builtin_lps():
    lps = {f"product({p},{q})": build_polyhedron(product_collection(p, q))
           for p in range(2, 7) for q in range(2, 7)}
    lps["commutator(2,2)"] = build_polyhedron(commutator_collection(2, 2))
    for p, q in COMMUTATOR_PAIRS:
        lps[f"commutator({p},{q})"] = build_polyhedron(commutator_collection(p, q))
    return lps


def test_criterion_7_lp_oracle(criterion):
    mismatches, dual_bad, compared = [], [], 0
    for name, lp in _builtin_lps().items():
        sol = solve_exact(lp)
        if verify_certificate(lp, sol):
            dual_bad.append(name)
        if lp.n <= 12:
            compared += 1
            if brute_force_vertices(lp)[0][1] != sol.value:
                mismatches.append(name)
    for word in [commutator_word(p, q) for p, q in COMMUTATOR_PAIRS] + \
            [product_word(p, q) for p, q in PRODUCT_PAIRS]:
        if not compute_stl(word.syllables, word.groups).lp_dual_ok:
            dual_bad.append(str(word))
    ok = not mismatches and not dual_bad
    criterion(7, ok, f"{compared} LPs compared with brute force, mismatches {mismatches}, "
                     f"dual failures {dual_bad}")
    assert ok


def test_criterion_8_round_trip(criterion):
    surfaces = [S for S in random_surfaces(77, 260) if S.chi_graph >= 0][:200]
    forward_bad = []
    for n, S in enumerate(surfaces):
        coll = make_collection(S.word, ((p.side, p.arcs) for p in S.pieces), "user")
        lp = build_polyhedron(coll)
        x = surface_point(S, coll)
        chi_o = -lp.value(x)
        if not lp.is_feasible(x) or chi_o != Fraction(euler_characteristic(S), S.degree):
            forward_bad.append(n)
    rng = random.Random(8)
    backward_bad, points = [], 0
    for p, q in [(2, 3), (3, 3), (2, 5), (3, 4), (4, 4)]:
        coll = product_collection(p, q)
        verts = [v for v, _ in brute_force_vertices(build_polyhedron(coll))]
        for _ in range(10):
            u, v = rng.choice(verts), rng.choice(verts)
            s = Fraction(rng.randint(0, 4), 4)
            x = [s * a + (1 - s) * b for a, b in zip(u, v)]
            points += 1
            S = assemble_from_vector(x, coll)
            if surface_point(S, coll) != x:
                backward_bad.append((p, q, x))
    ok = len(surfaces) >= 200 and not forward_bad and not backward_bad
    criterion(8, ok, f"{len(surfaces)} surfaces, {points} rational points, "
                     f"failures {forward_bad[:5]} {backward_bad[:2]}")
    assert ok


def test_criterion_9_exhaustive_oracle(criterion):
    c22 = product_collection(2, 2)
    lp22 = solve_exact(build_polyhedron(c22)).value
    best22 = min(S.ratio for S in enumerate_small_surfaces(c22, 4) if S.degree)
    c23 = product_collection(2, 3)
    lp23 = solve_exact(build_polyhedron(c23)).value
    ratios23 = [S.ratio for S in enumerate_small_surfaces(c23, 6) if S.degree]
    ok = best22 == 0 == lp22 and lp23 == Fraction(1, 4) and min(ratios23) >= lp23
    criterion(9, ok, f"ab p=q=2 best {best22} (LP {lp22}); ab p=2 q=3 best {min(ratios23)} "
                     f"over {len(ratios23)} surfaces (LP {lp23})")
    assert ok
