"""Explicit surfaces: tree strips, cyclic covers, tree approximations, branched
covers, and the optimal surfaces for the a*b and [a, b] families."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .groups import element_order
from .pieces import TurnType, commutator_word, compatible, match_pattern, product_word
from .rewrite import RewriteError, rewire
from .surfaces import SimpleSurface, SurfaceBuilder, SurfaceError
from .words import FreeProductWord


def tree_around_piece(word: FreeProductWord, side: str, arcs: Sequence[int]
                      ) -> tuple[SimpleSurface, list[int]]:
    """A tree surface containing one piece with the given raw arcs.

    Each turn of the piece is continued by a chain of two-arc pieces until
    the compatible turn has equal arc labels, where a one-arc piece caps it.
    Returns the surface (the given piece has index 0) and, for every raw
    turn of that piece, the index of the edge through it.
    """
    L = word.L
    if any(not 1 <= a <= L for a in arcs):
        raise ValueError("arc indices out of range")
    bld = SurfaceBuilder(word)
    centre = bld.add(side, arcs)
    edges = []
    e = len(arcs)
    for k in range(e):
        open_piece, open_turn = centre, k
        open_type = TurnType(side, arcs[k], arcs[(k + 1) % e])
        first = True
        while True:
            t = compatible(open_type, L)
            closing = t.src == t.dst
            nxt = bld.add(t.side, (t.src,) if closing else (t.src, t.dst))
            bld.glue(open_piece, open_turn, nxt, 0)
            if first:
                edges.append(len(bld.edges) - 1)
                first = False
            if closing:
                break
            open_piece, open_turn, open_type = nxt, 1, TurnType(t.side, t.dst, t.src)
    S = bld.build()
    assert S.is_connected() and S.chi_graph == 1
    return S, edges


def strip_surface(word: FreeProductWord, i: int, j: int) -> tuple[SimpleSurface, int]:
    """A tree surface containing an A-turn of type (i, j), and the edge index of that turn.

    The strip is centred on the two-arc piece (a_i, a_j).
    """
    if not (1 <= i <= word.L and 1 <= j <= word.L):
        raise ValueError("turn indices out of range")
    S, edges = tree_around_piece(word, "A", (i, j))
    return S, edges[0]


def finite_cover(S: SimpleSurface, k: int, edge: int | None = None) -> SimpleSurface:
    """Cyclic k-fold cover unwinding the core through one core edge."""
    if k < 1:
        raise ValueError("cover degree must be positive")
    if not S.is_connected() or S.chi_graph != 0:
        raise SurfaceError("finite covers need a connected surface with chi(Gamma) = 0")
    if edge is None:
        edge = min(S.core_edges())
    elif edge not in S.core_edges():
        raise SurfaceError(f"edge {edge} is not on the core")
    v = S.v
    matching = []
    for layer in range(k):
        for idx, ((pa, ka), (pb, kb)) in enumerate(S.matching):
            target = (layer + 1) % k if idx == edge else layer
            matching.append(((layer * v + pa, ka), (target * v + pb, kb)))
    return SimpleSurface(S.word, S.pieces * k, tuple(matching))


def cover_crossing_edge(S: SimpleSurface, edge: int | None = None) -> int:
    """Index, in finite_cover(S, k), of the layer-0 lift of the chosen core edge."""
    return min(S.core_edges()) if edge is None else edge


def approximate_by_tree(S: SimpleSurface, k: int) -> SimpleSurface:
    """k-fold cover of S merged with a strip by one rewiring: connected, chi(Gamma) = 1."""
    edge = cover_crossing_edge(S)
    cover = finite_cover(S, k, edge)
    t = S.edge_type(edge)
    strip, centre = strip_surface(S.word, t.src, t.dst)
    union = cover.disjoint_union(strip)
    merged = rewire(union, edge, cover.e + centre)
    assert merged.is_connected() and merged.chi_graph == 1
    return merged


def branched_cover_improvement(S: SimpleSurface, piece: int) -> SimpleSurface:
    """k copies of S minus an annulus piece C, joined through one disk covering C k times."""
    if not S.is_connected() or S.chi_graph != 1:
        raise SurfaceError("branched covers need a tree gluing graph")
    C = S.pieces[piece]
    if C.is_disk:
        raise SurfaceError("the chosen piece is a disk")
    k = element_order(S.word.factor(C.side), C.winding)
    if k < 2:
        raise SurfaceError("hole order must be at least 2")
    others = [p for p in range(S.v) if p != piece]
    bld = SurfaceBuilder(S.word)
    big = bld.add(C.side, C.arcs * k)
    copy_index = []
    for _ in range(k):
        copy_index.append({p: bld.add_piece(S.pieces[p]) for p in others})
    for c in range(k):
        idx = copy_index[c]
        for (pa, ka), (pb, kb) in S.matching:
            if pa == piece:
                bld.glue(big, c * C.e + ka, idx[pb], kb)
            elif pb == piece:
                bld.glue(idx[pa], ka, big, c * C.e + kb)
            else:
                bld.glue(idx[pa], ka, idx[pb], kb)
    out = bld.build()
    assert out.pieces[big].is_disk and out.is_connected()
    return out


# -- the two worked families -------------------------------------------------------

def _commutator_wiring(bld: SurfaceBuilder, side: str, other: str,
                       big_plus: int, big_minus: int, p: int) -> SimpleSurface:
    L = 2
    plus_turn = TurnType(side, 1, 1)
    minus_turn = TurnType(side, 2, 2)

    def connector() -> tuple[int, int, int]:
        """New connector piece; returns (piece, slot facing plus, slot facing minus)."""
        c = bld.add(other, (1, 2))
        piece = bld.pieces[c]
        face_plus = next(k for k in range(2) if compatible(piece.turn(k), L) == plus_turn)
        face_minus = 1 - face_plus
        assert compatible(piece.turn(face_minus), L) == minus_turn
        return c, face_plus, face_minus

    # core: plus -- T -- minus -- T -- plus
    for turn in (0, 1):
        c, fp, fm = connector()
        bld.glue(big_plus, turn, c, fp)
        bld.glue(big_minus, turn, c, fm)
    for turn in range(2, p):
        c, fp, fm = connector()
        bld.glue(big_plus, turn, c, fp)
        leaf = bld.add(side, (2,))
        bld.glue(leaf, 0, c, fm)
    for turn in range(2, p):
        c, fp, fm = connector()
        bld.glue(big_minus, turn, c, fm)
        leaf = bld.add(side, (1,))
        bld.glue(leaf, 0, c, fp)
    return bld.build()


def certificate_commutator_for(word: FreeProductWord) -> SimpleSurface:
    m = match_pattern(word)
    if m is None or m[0] != "commutator":
        raise ValueError("word is not of the form a b a^-1 b^-1")
    _, p, q = m
    bld = SurfaceBuilder(word)
    if p <= q:
        plus = bld.add("A", (1,) * p)
        minus = bld.add("A", (2,) * p)
        S = _commutator_wiring(bld, "A", "B", plus, minus, p)
    else:
        plus = bld.add("B", (1,) * q)
        minus = bld.add("B", (2,) * q)
        S = _commutator_wiring(bld, "B", "A", plus, minus, q)
    return S


def certificate_commutator(p: int, q: int) -> SimpleSurface:
    """Connected, chi(Gamma) = 0, ratio 1 - 1/(min(p, q) - 1)."""
    return certificate_commutator_for(commutator_word(p, q))


def _product_wiring(bld: SurfaceBuilder, small: str, large: str, p: int, q: int) -> SimpleSurface:
    """p is the order on side `small`, q >= p the order on side `large`."""
    hub = bld.add(large, (1,) * q)
    core = bld.add(small, (1,) * p)
    bld.glue(core, 0, hub, 0)
    bld.glue(core, 1, hub, 1)
    for t in range(2, p):
        bld.glue(core, t, bld.add(large, (1,)), 0)
    for t in range(2, q):
        spoke = bld.add(small, (1,) * p)
        bld.glue(spoke, 0, hub, t)
        for s in range(1, p):
            bld.glue(spoke, s, bld.add(large, (1,)), 0)
    return bld.build()


def certificate_product_for(word: FreeProductWord) -> SimpleSurface:
    m = match_pattern(word)
    if m is None or m[0] != "product":
        raise ValueError("word is not of the form a b")
    _, p, q = m
    bld = SurfaceBuilder(word)
    if p <= q:
        return _product_wiring(bld, "A", "B", p, q)
    return _product_wiring(bld, "B", "A", q, p)


def certificate_product(p: int, q: int) -> SimpleSurface:
    """Connected, chi(Gamma) = 0, ratio 1 - max/(min (max - 1))."""
    return certificate_product_for(product_word(p, q))


def builtin_certificate(word: FreeProductWord) -> SimpleSurface | None:
    m = match_pattern(word)
    if m is None:
        return None
    if m[0] == "product":
        return certificate_product_for(word)
    return certificate_commutator_for(word)


def commutator_formula(p: int, q: int) -> Fraction:
    return 1 - Fraction(1, min(p, q) - 1)


def product_formula(p: int, q: int) -> Fraction:
    p, q = min(p, q), max(p, q)
    return 1 - Fraction(q, p * (q - 1))


__all__ = ["tree_around_piece", "strip_surface", "finite_cover", "approximate_by_tree", "branched_cover_improvement",
           "certificate_commutator", "certificate_product", "certificate_commutator_for",
           "certificate_product_for", "builtin_certificate", "commutator_formula",
           "product_formula", "RewriteError"]
