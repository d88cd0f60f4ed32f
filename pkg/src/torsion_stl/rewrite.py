"""Splitting of pieces and rewiring of gluing-graph edges.

Splitting replaces one piece by a disk piece and a piece of the same shape;
rewiring swaps the partners of two same-type edges.  Both strictly decrease
kappa = 2e - 2c + l when applied in the admissible situations, which is what
makes ``reduce_to_irreducible`` terminate.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .pieces import canonical_rotation, make_piece
from .surfaces import SimpleSurface, SurfaceError, kappa


class RewriteError(ValueError):
    pass


# -- splitting ------------------------------------------------------------------

def _replace_piece(S: SimpleSurface, p: int,
                   parts: Sequence[tuple[Sequence[int], Sequence[int]]]) -> SimpleSurface:
    """Replace piece p by parts given as (raw arcs, original turn index of each raw turn).

    The first part keeps index p, later parts are appended.
    """
    side = S.pieces[p].side
    pieces = list(S.pieces)
    where: dict[int, tuple[int, int]] = {}
    for n, (arcs, turn_ids) in enumerate(parts):
        piece = make_piece(side, arcs, S.word)
        _, shift = canonical_rotation(arcs)
        idx = p if n == 0 else len(pieces)
        if n == 0:
            pieces[p] = piece
        else:
            pieces.append(piece)
        for t, old in enumerate(turn_ids):
            where[old] = (idx, (t - shift) % len(arcs))
    if sorted(where) != list(range(S.pieces[p].e)):
        raise RewriteError("split parts do not cover every turn exactly once")

    def move(slot):
        q, k = slot
        return where[k] if q == p else slot

    matching = tuple((move(a), move(b)) for a, b in S.matching)
    return SimpleSurface(S.word, tuple(pieces), matching)


def _arc_elems(S: SimpleSurface, p: int) -> list[int]:
    piece = S.pieces[p]
    return [S.word.letter(piece.side, a) for a in piece.arcs]


def splitting_positions(S: SimpleSurface, p: int) -> Iterator[tuple[int, int]]:
    """All (i, j) with a splitting of piece p at turns i and j.

    Turns i and j must lead into arcs with the same label, and the arcs
    i+1..j must multiply to the identity.
    """
    piece = S.pieces[p]
    e = piece.e
    grp = S.word.factor(piece.side)
    elems = _arc_elems(S, p)
    for i in range(e):
        acc = grp.identity
        for step in range(1, e):
            j = (i + step) % e
            acc = grp.mul(acc, elems[j])
            if acc == grp.identity and piece.arcs[(i + 1) % e] == piece.arcs[(j + 1) % e]:
                yield i, j


def first_splitting(S: SimpleSurface, p: int) -> tuple[int, int] | None:
    return next(splitting_positions(S, p), None)


def split_piece(S: SimpleSurface, p: int, i: int, j: int, mode: str = "special") -> SimpleSurface:
    """Split piece p at turn positions i and j.

    ``mode="special"`` cuts out the arcs i+1..j (identity product) as a disk.
    ``mode="abelian"`` removes a turn pair (x, y) at i and (y, x) at j with
    a_x a_y = 1 in an abelian factor, forming the two-arc disk on x, y.
    """
    if mode == "abelian":
        return _split_abelian(S, p, i, j)
    if mode != "special":
        raise ValueError(f"unknown splitting mode {mode!r}")
    piece = S.pieces[p]
    e = piece.e
    i, j = i % e, j % e
    if i == j:
        raise RewriteError("splitting needs two distinct turns")
    if (i, j) not in set(splitting_positions(S, p)):
        raise RewriteError(f"no splitting of piece {p} at turns {i}, {j}")
    n1 = (j - i) % e
    c1 = ([piece.arcs[(i + 1 + t) % e] for t in range(n1)], [(i + 1 + t) % e for t in range(n1)])
    c2 = ([piece.arcs[(j + 1 + t) % e] for t in range(e - n1)],
          [(j + 1 + t) % e for t in range(e - n1)])
    out = _replace_piece(S, p, [c2, c1])
    assert out.pieces[p].shape == piece.shape and out.pieces[-1].is_disk
    return out


def _split_abelian(S: SimpleSurface, p: int, s: int, r: int) -> SimpleSurface:
    piece = S.pieces[p]
    grp = S.word.factor(piece.side)
    if not grp.is_abelian():
        raise RewriteError("the abelian splitting needs an abelian factor")
    e = piece.e
    s, r = s % e, r % e
    if s == r:
        raise RewriteError("splitting needs two distinct turns")
    arcs = piece.arcs
    x, y = arcs[s], arcs[(s + 1) % e]
    if (arcs[r], arcs[(r + 1) % e]) != (y, x):
        raise RewriteError(f"turns {s} and {r} are not of types (x,y) and (y,x)")
    if grp.mul(S.word.letter(piece.side, x), S.word.letter(piece.side, y)) != grp.identity:
        raise RewriteError("the two arcs do not multiply to the identity")
    path1 = [(s + 1 + t) % e for t in range((r - s - 1) % e)]
    path2 = [(r + 1 + t) % e for t in range((s - r - 1) % e)]
    if not path1 and not path2:
        raise RewriteError("nothing left after removing the turn pair")
    if path1 and path2:
        src1 = [arcs[k] for k in path1]
        hit = next(((a, src1.index(arcs[k])) for a, k in enumerate(path2) if arcs[k] in src1),
                   None)
        if hit is None:
            raise RewriteError("the two remaining closed walks share no arc label")
        a, b = hit
        walk = path1[b:] + path1[:b] + path2[a:] + path2[:a]
    else:
        walk = path1 or path2
    rest = ([arcs[k] for k in walk], walk)
    disk = ([x, y], [s, r])
    return _replace_piece(S, p, [rest, disk])


# -- rewiring --------------------------------------------------------------------

def rewire(S: SimpleSurface, i: int, j: int) -> SimpleSurface:
    """Swap partners: (a_i, b_i), (a_j, b_j) -> (a_i, b_j), (a_j, b_i)."""
    if i == j:
        raise RewriteError("rewiring needs two distinct edges")
    if S.edge_type(i) != S.edge_type(j):
        raise RewriteError(f"edges {i} and {j} have different types")
    m = list(S.matching)
    (ai, bi), (aj, bj) = m[i], m[j]
    m[i], m[j] = (ai, bj), (aj, bi)
    return SimpleSurface(S.word, S.pieces, tuple(m))


class _Analysis:
    """Per-surface data for classifying rewirings."""

    def __init__(self, S: SimpleSurface):
        self.S = S
        self.comp = S.component_of
        self.comp_chi = S.component_chi_graph()
        self.core_e = S.core_edges()
        core_v = S.core_vertices()
        # decorative trees: parent pointers toward the core
        self.parent: dict[int, int] = {}
        self.root: dict[int, int] = {}
        self.depth: dict[int, int] = {}
        queue = deque()
        for c in sorted(core_v):
            self.root[c] = c
            self.depth[c] = 0
            queue.append(c)
        while queue:
            x = queue.popleft()
            for y, _ in S.adjacency[x]:
                if y not in self.root:
                    self.root[y] = self.root[x]
                    self.depth[y] = self.depth[x] + 1
                    self.parent[y] = x
                    queue.append(y)

    def distances(self, sources: Sequence[int]) -> dict[int, int]:
        dist = {s: 0 for s in sources}
        queue = deque(sources)
        while queue:
            x = queue.popleft()
            for y, _ in self.S.adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def tree_same_orientation(self, i: int, j: int) -> bool:
        u1, v1 = self.S.edge_ends(i)
        u2, v2 = self.S.edge_ends(j)
        d2 = self.distances([u2, v2])
        start1 = u1 if d2[u1] > d2[v1] else v1
        d1 = self.distances([u1, v1])
        near2 = u2 if d1[u2] < d1[v2] else v2
        return (start1 == u1) == (near2 == u2)

    def core_same_orientation(self, i: int, j: int) -> bool:
        S = self.S
        u1, v1 = S.edge_ends(i)
        cur, came = v1, i
        while True:
            nxt = next(ed for _, ed in S.adjacency[cur] if ed in self.core_e and ed != came)
            a, b = S.edge_ends(nxt)
            if nxt == j:
                return cur == a  # traversed from its A end, like edge i
            cur = b if cur == a else a
            came = nxt
            if nxt == i:
                raise SurfaceError("core walk did not meet the second edge")

    def tree_edge(self, i: int) -> tuple[int, int]:
        """(parent end, child end) of a decorative-tree edge."""
        a, b = self.S.edge_ends(i)
        return (a, b) if self.depth[a] < self.depth[b] else (b, a)

    def is_ancestor(self, x: int, y: int) -> bool:
        """Whether x lies on the root-ward path from y (inclusive)."""
        while True:
            if y == x:
                return True
            if y not in self.parent:
                return False
            y = self.parent[y]

    def classify(self, i: int, j: int) -> str:
        S = self.S
        a1, _ = S.edge_ends(i)
        a2, _ = S.edge_ends(j)
        if self.comp[a1] != self.comp[a2]:
            return "merge"
        chi = self.comp_chi[self.comp[a1]]
        if chi == 1:
            return "I" if self.tree_same_orientation(i, j) else "other"
        if chi != 0:
            return "other"
        on_core = (i in self.core_e, j in self.core_e)
        if all(on_core):
            return "III" if self.core_same_orientation(i, j) else "other"
        if any(on_core):
            return "other"
        p1, c1 = self.tree_edge(i)
        p2, c2 = self.tree_edge(j)
        if self.root[c1] != self.root[c2]:
            return "other"
        if self.is_ancestor(c1, p2):
            shallow, deep = (i, p1), (j, p2)
        elif self.is_ancestor(c2, p1):
            shallow, deep = (j, p2), (i, p1)
        else:
            return "other"
        same = ((shallow[1] == S.edge_ends(shallow[0])[0])
                == (deep[1] == S.edge_ends(deep[0])[0]))
        return "II" if same else "other"


def classify_rewiring(S: SimpleSurface, i: int, j: int) -> str:
    """One of 'I', 'II', 'III', 'merge', 'other'."""
    if i == j:
        raise RewriteError("rewiring needs two distinct edges")
    if S.edge_type(i) != S.edge_type(j):
        raise RewriteError(f"edges {i} and {j} have different types")
    return _Analysis(S).classify(i, j)


REDUCING_KINDS = ("I", "II", "III")


def rewiring_candidates(S: SimpleSurface) -> Iterator[tuple[int, int, str]]:
    """Same-type edge pairs (i < j) admitting a type I, II or III rewiring."""
    an = _Analysis(S)
    by_type: dict = {}
    for k in range(S.e):
        by_type.setdefault(S.edge_type(k), []).append(k)
    pairs = sorted((i, j) for es in by_type.values()
                   for x, i in enumerate(es) for j in es[x + 1:])
    for i, j in pairs:
        kind = an.classify(i, j)
        if kind in REDUCING_KINDS:
            yield i, j, kind


def first_rewiring(S: SimpleSurface) -> tuple[int, int, str] | None:
    return next(rewiring_candidates(S), None)


# -- reduction --------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    kind: str  # "split" or "I"/"II"/"III"
    detail: tuple
    kappa_before: int
    kappa_after: int


def reduce_with_trace(S: SimpleSurface, max_steps: int | None = None
                      ) -> tuple[list[SimpleSurface], list[Step]]:
    if any(x < 0 for x in S.component_chi_graph()):
        raise RewriteError("every component needs chi(Gamma) >= 0")
    steps: list[Step] = []
    limit = kappa(S) if max_steps is None else max_steps
    while True:
        k0 = kappa(S)
        move = None
        for p in range(S.v):
            pos = first_splitting(S, p)
            if pos is not None:
                move = ("split", (p,) + pos, split_piece(S, p, *pos))
                break
        if move is None:
            rw = first_rewiring(S)
            if rw is not None:
                i, j, kind = rw
                move = (kind, (i, j), rewire(S, i, j))
        if move is None:
            break
        kind, detail, S = move
        k1 = kappa(S)
        steps.append(Step(kind, detail, k0, k1))
        if k1 >= k0:
            raise AssertionError(f"kappa did not decrease under {kind}: {k0} -> {k1}")
        if len(steps) > limit:
            raise AssertionError("reduction exceeded kappa steps")
    return S.split_components(), steps


def reduce_to_irreducible(S: SimpleSurface) -> list[SimpleSurface]:
    return reduce_with_trace(S)[0]


# -- irreducibility --------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    kind: str
    detail: tuple = ()


def _eccentricity_bound(S: SimpleSurface) -> int:
    """Diameter of a tree gluing graph (two BFS sweeps)."""
    an = _Analysis(S)
    d0 = an.distances([0])
    far = max(d0, key=lambda x: (d0[x], -x))
    d1 = an.distances([far])
    return max(d1.values())


def is_irreducible(S: SimpleSurface) -> tuple[bool, Witness | None]:
    if not S.is_connected():
        raise RewriteError("irreducibility is defined for connected surfaces")
    L = S.word.L
    chi = S.chi_graph
    if chi < 0:
        return False, Witness("chi_graph", (chi,))
    bound = L * L * max(S.word.factor("A").order, S.word.factor("B").order)
    for p, piece in enumerate(S.pieces):
        if piece.e > bound:
            return False, Witness("valence", (p, piece.e, bound))
    limit = 2 * L * L
    if chi == 1:
        diam = _eccentricity_bound(S)
        if diam > limit:
            return False, Witness("diameter", (diam, limit))
    else:
        an = _Analysis(S)
        far = max(an.depth.values())
        if far > limit:
            return False, Witness("root_distance", (far, limit))
        core_len = len(an.core_e)
        if core_len > limit:
            return False, Witness("core_length", (core_len, limit))
    for p in range(S.v):
        pos = first_splitting(S, p)
        if pos is not None:
            return False, Witness("splitting", (p,) + pos)
    rw = first_rewiring(S)
    if rw is not None:
        return False, Witness("rewiring-" + rw[2], rw[:2])
    return True, None
