"""Simple surfaces: piece instances plus a perfect matching of compatible turn slots.

A slot is ``(piece_index, turn_index)`` where turn k of a piece runs from its
arc k to arc k+1.  Every matched pair is stored A-slot first; the position of
a pair in ``matching`` is its edge index in the gluing graph.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .pieces import PieceType, TurnType, canonical_rotation, compatible, make_piece
from .words import FreeProductWord

Slot = tuple[int, int]
Edge = tuple[Slot, Slot]


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleSurface:
    word: FreeProductWord
    pieces: tuple[PieceType, ...]
    matching: tuple[Edge, ...]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        L = self.word.L
        seen: set[Slot] = set()
        for (pa, ka), (pb, kb) in self.matching:
            for p, k in ((pa, ka), (pb, kb)):
                if not 0 <= p < len(self.pieces) or not 0 <= k < self.pieces[p].e:
                    raise SurfaceError(f"slot {(p, k)} does not exist")
                if (p, k) in seen:
                    raise SurfaceError(f"slot {(p, k)} matched twice")
                seen.add((p, k))
            if self.pieces[pa].side != "A" or self.pieces[pb].side != "B":
                raise SurfaceError("edges must join an A-slot to a B-slot")
            if compatible(self.pieces[pa].turn(ka), L) != self.pieces[pb].turn(kb):
                raise SurfaceError(f"turns at {(pa, ka)} and {(pb, kb)} are not compatible")
        total = sum(p.e for p in self.pieces)
        if len(seen) != total:
            raise SurfaceError(f"{total - len(seen)} turn slots left unmatched")

    # -- basic counts ---------------------------------------------------------

    @property
    def v(self) -> int:
        return len(self.pieces)

    @property
    def e(self) -> int:
        return len(self.matching)

    @property
    def d(self) -> int:
        return sum(1 for p in self.pieces if p.is_disk)

    @property
    def H(self) -> int:
        """Number of annulus pieces, i.e. holes."""
        return self.v - self.d

    @property
    def neg_chi(self) -> int:
        return self.e - self.d

    @property
    def degree(self) -> int:
        return sum(p.count_arc(1) for p in self.pieces if p.side == "A")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.neg_chi, self.degree)

    @property
    def chi_graph(self) -> int:
        return self.v - self.e

    # -- graph structure --------------------------------------------------------

    @cached_property
    def partner(self) -> dict[Slot, Slot]:
        out = {}
        for a, b in self.matching:
            out[a] = b
            out[b] = a
        return out

    @cached_property
    def edge_at(self) -> dict[Slot, int]:
        out = {}
        for i, (a, b) in enumerate(self.matching):
            out[a] = i
            out[b] = i
        return out

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """adjacency[p] lists (neighbour, edge index) in p's turn order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.pieces]
        for p, piece in enumerate(self.pieces):
            for k in range(piece.e):
                q, _ = self.partner[(p, k)]
                adj[p].append((q, self.edge_at[(p, k)]))
        return adj

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        comp = [-1] * self.v
        c = 0
        for s in range(self.v):
            if comp[s] >= 0:
                continue
            comp[s] = c
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y, _ in self.adjacency[x]:
                    if comp[y] < 0:
                        comp[y] = c
                        queue.append(y)
            c += 1
        return tuple(comp)

    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for p, c in enumerate(self.component_of):
            groups.setdefault(c, []).append(p)
        return [groups[c] for c in sorted(groups)]

    @property
    def c(self) -> int:
        return len(set(self.component_of))

    def is_connected(self) -> bool:
        return self.c == 1

    def component_chi_graph(self) -> list[int]:
        v = [0] * self.c
        e = [0] * self.c
        for p in range(self.v):
            v[self.component_of[p]] += 1
        for (pa, _), _ in self.matching:
            e[self.component_of[pa]] += 1
        return [a - b for a, b in zip(v, e)]

    @property
    def ell(self) -> int:
        """Number of components whose gluing graph has Euler characteristic 0."""
        return sum(1 for x in self.component_chi_graph() if x == 0)

    def edge_type(self, i: int) -> TurnType:
        (pa, ka), _ = self.matching[i]
        return self.pieces[pa].turn(ka)

    def edge_ends(self, i: int) -> tuple[int, int]:
        """(A-piece, B-piece) of edge i."""
        (pa, _), (pb, _) = self.matching[i]
        return pa, pb

    def core_vertices(self) -> set[int]:
        """Vertices of the 2-core (the embedded loops) of the gluing graph."""
        deg = [len(a) for a in self.adjacency]
        alive = [True] * self.v
        queue = deque(p for p in range(self.v) if deg[p] <= 1)
        while queue:
            p = queue.popleft()
            if not alive[p]:
                continue
            alive[p] = False
            for q, _ in self.adjacency[p]:
                if alive[q]:
                    deg[q] -= 1
                    if deg[q] <= 1:
                        queue.append(q)
        return {p for p in range(self.v) if alive[p]}

    def core_edges(self) -> set[int]:
        core = self.core_vertices()
        return {i for i in range(self.e)
                if self.edge_ends(i)[0] in core and self.edge_ends(i)[1] in core}

    # -- derived surfaces ---------------------------------------------------------

    def subsurface(self, piece_indices: Sequence[int]) -> SimpleSurface:
        keep = sorted(piece_indices)
        new = {p: k for k, p in enumerate(keep)}
        matching = []
        for (pa, ka), (pb, kb) in self.matching:
            if pa in new:
                if pb not in new:
                    raise SurfaceError("subsurface must be a union of components")
                matching.append(((new[pa], ka), (new[pb], kb)))
        return SimpleSurface(self.word, tuple(self.pieces[p] for p in keep), tuple(matching))

    def split_components(self) -> list[SimpleSurface]:
        return [self.subsurface(c) for c in self.components()]

    def disjoint_union(self, other: SimpleSurface) -> SimpleSurface:
        off = self.v
        matching = self.matching + tuple(((pa + off, ka), (pb + off, kb))
                                         for (pa, ka), (pb, kb) in other.matching)
        return SimpleSurface(self.word, self.pieces + other.pieces, matching)

    def piece_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for p in self.pieces:
            out[p.key] = out.get(p.key, 0) + 1
        return out

    def boundary_cycles(self) -> list[list[tuple[int, int]]]:
        """Boundary components as cyclic lists of (piece, arc index)."""
        seen: set[tuple[int, int]] = set()
        cycles = []
        for p, piece in enumerate(self.pieces):
            for k in range(piece.e):
                if (p, k) in seen or not (piece.side == "A" and piece.arcs[k] == 1):
                    continue
                cyc = []
                cur = (p, k)
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    q, m = self.partner[cur]
                    cur = (q, (m + 1) % self.pieces[q].e)
                cycles.append(cyc)
        if len(seen) != sum(p.e for p in self.pieces):
            raise SurfaceError("some boundary arcs are not reached from an alpha_1 arc")
        return cycles

    def boundary_syllables(self, cycle: Sequence[tuple[int, int]]) -> list[tuple[str, int]]:
        out = []
        for p, k in cycle:
            piece = self.pieces[p]
            out.append((piece.side, self.word.letter(piece.side, piece.arcs[k])))
        return out

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {"pieces": [p.key for p in self.pieces],
                "matching": [[[pa, ka], [pb, kb]] for (pa, ka), (pb, kb) in self.matching]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, word: FreeProductWord) -> SimpleSurface:
        pieces = []
        for key in data["pieces"]:
            side, *arcs = key.split("_")
            p = make_piece(side, [int(a) for a in arcs], word)
            if p.key != key:
                raise SurfaceError(f"piece key {key!r} is not in canonical rotation")
            pieces.append(p)
        matching = tuple(((int(a[0]), int(a[1])), (int(b[0]), int(b[1])))
                         for a, b in data["matching"])
        return cls(word, tuple(pieces), matching)

    def to_dot(self, name: str = "gluing_graph") -> str:
        lines = [f"graph {name} {{"]
        for p, piece in enumerate(self.pieces):
            shape = "circle" if piece.is_disk else "doublecircle"
            lines.append(f'  v{p} [label="{piece.key}", shape={shape}];')
        for i, ((pa, ka), (pb, kb)) in enumerate(self.matching):
            t = self.pieces[pa].turn(ka)
            lines.append(f'  v{pa} -- v{pb} [label="{t.side}({t.src},{t.dst})", id="e{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def euler_characteristic(S: SimpleSurface) -> int:
    """chi(S), computed two ways that must agree."""
    via_disks = S.d - S.e
    via_pieces = sum(p.chi for p in S.pieces) - S.e
    if via_disks != via_pieces:
        raise AssertionError(f"Euler characteristic mismatch: {via_disks} vs {via_pieces}")
    return via_disks


def degree(S: SimpleSurface) -> int:
    return S.degree


def kappa(S: SimpleSurface) -> int:
    return 2 * S.e - 2 * S.c + S.ell


def piece_vector(S: SimpleSurface, keys: Sequence[str]) -> list[int]:
    counts = S.piece_counts()
    extra = set(counts) - set(keys)
    if extra:
        raise SurfaceError(f"surface uses pieces outside the collection: {sorted(extra)}")
    return [counts.get(k, 0) for k in keys]


class SurfaceBuilder:
    """Assemble a surface from pieces given in any rotation."""

    def __init__(self, word: FreeProductWord):
        self.word = word
        self.pieces: list[PieceType] = []
        self.shifts: list[int] = []
        self.edges: list[tuple[Slot, Slot]] = []

    def add(self, side: str, arcs: Sequence[int]) -> int:
        _, shift = canonical_rotation(arcs)
        self.pieces.append(make_piece(side, arcs, self.word))
        self.shifts.append(shift)
        return len(self.pieces) - 1

    def add_piece(self, piece: PieceType) -> int:
        self.pieces.append(piece)
        self.shifts.append(0)
        return len(self.pieces) - 1

    def slot(self, p: int, k: int) -> Slot:
        """Canonical slot for turn k of piece p as it was given to add()."""
        e = self.pieces[p].e
        return (p, (k - self.shifts[p]) % e)

    def glue(self, p: int, k: int, q: int, m: int) -> None:
        s, t = self.slot(p, k), self.slot(q, m)
        if self.pieces[p].side == "B":
            s, t = t, s
        self.edges.append((s, t))

    def free_slots(self, p: int) -> list[int]:
        """Raw turn indices of p not yet glued."""
        used = {k for (a, b) in self.edges for (q, k) in (a, b) if q == p}
        e = self.pieces[p].e
        return [k for k in range(e) if (k - self.shifts[p]) % e not in used]

    def build(self) -> SimpleSurface:
        return SimpleSurface(self.word, tuple(self.pieces), tuple(self.edges))


def stats(S: SimpleSurface) -> dict:
    return {"v": S.v, "e": S.e, "d": S.d, "c": S.c, "ell": S.ell, "H": S.H,
            "neg_chi": S.neg_chi, "degree": S.degree, "chi_graph": S.chi_graph,
            "kappa": kappa(S), "ratio": str(S.ratio) if S.degree else None}


def relabel(S: SimpleSurface, order: Iterable[int]) -> SimpleSurface:
    """Reorder pieces; order[new] = old."""
    order = list(order)
    new = {old: k for k, old in enumerate(order)}
    matching = tuple(((new[pa], ka), (new[pb], kb)) for (pa, ka), (pb, kb) in S.matching)
    return SimpleSurface(S.word, tuple(S.pieces[o] for o in order), matching)
