"""Turning a rational point of the LP polyhedron into a concrete simple surface."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .lp import build_polyhedron
from .pieces import PieceCollection, compatible
from .rewrite import rewire
from .surfaces import SimpleSurface, piece_vector


class InfeasiblePoint(ValueError):
    pass


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def assemble_from_vector(x: Sequence[Fraction], collection: PieceCollection,
                         scale_hint: int = 1) -> SimpleSurface:
    """Surface with n * x copies of each piece, n = lcm of denominators * scale_hint.

    Slots of each compatible turn pair are matched greedily, preferring a
    partner in a different component so the result is as connected as the
    counts allow.
    """
    if scale_hint < 1:
        raise ValueError("scale hint must be positive")
    x = [Fraction(v) for v in x]
    lp = build_polyhedron(collection)
    problems = lp.violations(x)
    if problems:
        raise InfeasiblePoint("; ".join(problems))
    n = lcm(*(v.denominator for v in x)) * scale_hint
    counts = [int(v * n) for v in x]
    pieces = []
    for piece, cnt in zip(collection.pieces, counts):
        pieces.extend([piece] * cnt)
    word = collection.word
    L = word.L
    slots_a: dict = {}
    slots_b: dict = {}
    for p, piece in enumerate(pieces):
        for k in range(piece.e):
            t = piece.turn(k)
            (slots_a if t.side == "A" else slots_b).setdefault(t, []).append((p, k))
    uf = _UnionFind(len(pieces))
    matching = []
    for t in sorted(slots_a):
        a_list = slots_a[t]
        b_list = list(slots_b.get(compatible(t, L), []))
        if len(a_list) != len(b_list):
            raise InfeasiblePoint(f"turn counts for {t} do not balance")
        for a in a_list:
            ra = uf.find(a[0])
            pick = next((k for k, b in enumerate(b_list) if uf.find(b[0]) != ra), 0)
            b = b_list.pop(pick)
            uf.union(a[0], b[0])
            matching.append((a, b))
    for t, b_list in slots_b.items():
        if compatible(t, L) not in slots_a and b_list:
            raise InfeasiblePoint(f"turn counts for {t} do not balance")
    S = repair_components(SimpleSurface(word, tuple(pieces), tuple(matching)))
    assert S.degree == n
    return S


def _is_bridge(S: SimpleSurface, i: int) -> bool:
    a, b = S.edge_ends(i)
    seen = {a}
    stack = [a]
    while stack:
        x = stack.pop()
        for y, ed in S.adjacency[x]:
            if ed != i and y not in seen:
                if y == b:
                    return False
                seen.add(y)
                stack.append(y)
    return True


def repair_components(S: SimpleSurface) -> SimpleSurface:
    """Merge components with chi(Gamma) < 0 into tree components by rewiring.

    Rewiring a non-separating edge of one component with a same-type edge of
    another joins them, adding their graph Euler characteristics.
    """
    while True:
        chis = S.component_chi_graph()
        comp = S.component_of
        move = None
        for i in range(S.e):
            ci = comp[S.edge_ends(i)[0]]
            if chis[ci] >= 0:
                continue
            for j in range(S.e):
                cj = comp[S.edge_ends(j)[0]]
                if chis[cj] > 0 and S.edge_type(i) == S.edge_type(j) and not _is_bridge(S, i):
                    move = (i, j)
                    break
            if move:
                break
        if move is None:
            return S
        S = rewire(S, *move)


def surface_point(S: SimpleSurface, collection: PieceCollection) -> list[Fraction]:
    """v(S) / n(S) in the collection's coordinates."""
    keys = [p.key for p in collection.pieces]
    return [Fraction(c, S.degree) for c in piece_vector(S, keys)]
