"""Exhaustive enumeration of small connected simple surfaces, up to isomorphism."""
from __future__ import annotations

import itertools
from math import factorial
from typing import Iterator, Sequence

from .pieces import PieceCollection, PieceType, compatible
from .surfaces import SimpleSurface

DEFAULT_MAX_PIECES = 6
DEFAULT_MATCHING_CAP = 200_000


class EnumerationCapError(RuntimeError):
    pass


def _turn_profile(piece: PieceType) -> dict:
    out: dict = {}
    for t in piece.turns():
        out[t] = out.get(t, 0) + 1
    return out


def balanced_multisets(collection: PieceCollection, max_pieces: int,
                       chi_graph: Sequence[int] = (0, 1)) -> Iterator[tuple[int, ...]]:
    """Count vectors whose A- and B-turns pair up and whose v - e is allowed."""
    pieces = collection.pieces
    L = collection.word.L
    profiles = [_turn_profile(p) for p in pieces]
    counts = [0] * len(pieces)

    def balanced() -> bool:
        tot: dict = {}
        for c, prof in zip(counts, profiles):
            if c:
                for t, m in prof.items():
                    tot[t] = tot.get(t, 0) + c * m
        for t, m in tot.items():
            if t.side == "A" and tot.get(compatible(t, L), 0) != m:
                return False
            if t.side == "B" and tot.get(compatible(t, L), 0) != m:
                return False
        return True

    def rec(k: int, used: int, ea: int, eb: int):
        if k == len(pieces):
            if used and ea == eb and (used - ea) in chi_graph and balanced():
                yield tuple(counts)
            return
        p = pieces[k]
        for c in range(0, max_pieces - used + 1):
            na = ea + (c * p.e if p.side == "A" else 0)
            nb = eb + (c * p.e if p.side == "B" else 0)
            # v >= e is needed for chi(Gamma) >= 0; remaining pieces add at least one turn each
            if max(na, nb) > max_pieces:
                break
            counts[k] = c
            yield from rec(k + 1, used + c, na, nb)
        counts[k] = 0

    yield from rec(0, 0, 0, 0)


def _canonical_code(S: SimpleSurface) -> tuple:
    best = None
    for s, piece in enumerate(S.pieces):
        per = piece.period()
        for r in range(0, piece.e, per):
            code = _bfs_code(S, s, r)
            if best is None or code < best:
                best = code
    return best


def _bfs_code(S: SimpleSurface, start: int, rot: int) -> tuple:
    order = [start]
    offset = {start: rot}
    index = {start: 0}
    out = []
    i = 0
    while i < len(order):
        p = order[i]
        piece = S.pieces[p]
        out.append((-1, piece.key))
        for t in range(piece.e):
            q, m = S.partner[(p, (t + offset[p]) % piece.e)]
            if q not in index:
                per = S.pieces[q].period()
                index[q] = len(order)
                offset[q] = m - (m % per)
                order.append(q)
            out.append((index[q], (m - offset[q]) % S.pieces[q].e))
        i += 1
    if len(order) != S.v:
        raise ValueError("canonical codes are defined for connected surfaces")
    return tuple(out)


def canonical_form(S: SimpleSurface) -> tuple:
    return _canonical_code(S)


def enumerate_small_surfaces(collection: PieceCollection, max_pieces: int = DEFAULT_MAX_PIECES,
                             chi_graph: Sequence[int] = (0, 1), connected: bool = True,
                             matching_cap: int = DEFAULT_MATCHING_CAP) -> Iterator[SimpleSurface]:
    """All connected surfaces over the collection within the caps, one per isomorphism class."""
    if not connected:
        raise ValueError("only connected enumeration is supported")
    if not collection.pieces:
        return
    word = collection.word
    L = word.L
    seen: set = set()
    for counts in balanced_multisets(collection, max_pieces, chi_graph):
        pieces = []
        for piece, c in zip(collection.pieces, counts):
            pieces.extend([piece] * c)
        slots_a: dict = {}
        slots_b: dict = {}
        for p, piece in enumerate(pieces):
            for k in range(piece.e):
                t = piece.turn(k)
                (slots_a if t.side == "A" else slots_b).setdefault(t, []).append((p, k))
        types = sorted(slots_a)
        total = 1
        for t in types:
            total *= factorial(len(slots_a[t]))
        if total > matching_cap:
            raise EnumerationCapError(
                f"{total} matchings for piece counts {counts} exceed the cap {matching_cap}")
        per_type = [[list(zip(slots_a[t], perm))
                     for perm in itertools.permutations(slots_b[compatible(t, L)])]
                    for t in types]
        for choice in itertools.product(*per_type):
            matching = tuple(pair for group in choice for pair in group)
            S = SimpleSurface(word, tuple(pieces), matching)
            if not S.is_connected():
                continue
            code = _canonical_code(S)
            if code in seen:
                continue
            seen.add(code)
            yield S


def minimum_ratio(surfaces) -> tuple:
    best = None
    for S in surfaces:
        if S.degree == 0:
            continue
        if best is None or S.ratio < best[0]:
            best = (S.ratio, S)
    return best if best else (None, None)
