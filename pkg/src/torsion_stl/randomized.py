"""Seeded random simple surfaces for property checks.

Surfaces start from strips and worked-family certificates and are then
scrambled by rewirings and by gluing a disk piece into a neighbour (the
inverse of splitting), always keeping every component at chi(Gamma) >= 0.
"""
from __future__ import annotations

import random
from typing import Sequence

from .constructions import approximate_by_tree, builtin_certificate, finite_cover, strip_surface
from .groups import FiniteGroup
from .pieces import commutator_word, product_word
from .rewrite import RewriteError, rewire
from .surfaces import SimpleSurface, SurfaceBuilder
from .words import FreeProduct, FreeProductWord


def merge_pieces(S: SimpleSurface, d: int, s: int, q: int, t: int) -> SimpleSurface:
    """Glue disk piece d into piece q at turns s and t (inverse of splitting)."""
    D, Q = S.pieces[d], S.pieces[q]
    if d == q or D.side != Q.side or not D.is_disk:
        raise RewriteError("need a disk piece and a second piece on the same side")
    if D.arcs[(s + 1) % D.e] != Q.arcs[(t + 1) % Q.e]:
        raise RewriteError("the turns must lead into arcs with the same label")
    bld = SurfaceBuilder(S.word)
    new_index = {}
    for p, piece in enumerate(S.pieces):
        if p not in (d, q):
            new_index[p] = bld.add_piece(piece)
    arcs = ([D.arcs[(s + 1 + u) % D.e] for u in range(D.e)]
            + [Q.arcs[(t + 1 + u) % Q.e] for u in range(Q.e)])
    merged = bld.add(D.side, arcs)
    raw_turn = {}
    for u in range(D.e):
        raw_turn[(d, (s + 1 + u) % D.e)] = u
    for u in range(Q.e):
        raw_turn[(q, (t + 1 + u) % Q.e)] = D.e + u

    def locate(slot):
        p, k = slot
        if p in (d, q):
            return merged, raw_turn[(p, k)]
        return new_index[p], k

    for a, b in S.matching:
        pa, ka = locate(a)
        pb, kb = locate(b)
        bld.glue(pa, ka, pb, kb)
    return bld.build()


def random_word(rng: random.Random) -> FreeProductWord:
    kind = rng.choice(["product", "commutator", "commutator", "general"])
    if kind == "product":
        return product_word(rng.randint(2, 5), rng.randint(2, 5))
    if kind == "commutator":
        return commutator_word(rng.randint(2, 4), rng.randint(2, 4))
    p, q = rng.randint(2, 5), rng.randint(2, 5)
    G = FreeProduct(FiniteGroup.cyclic(p, "a"), FiniteGroup.cyclic(q, "b"))
    L = rng.randint(2, 3)
    raw = []
    for _ in range(L):
        raw.append(("A", rng.randint(1, p - 1)))
        raw.append(("B", rng.randint(1, q - 1)))
    return G.word(raw)


def base_surfaces(word: FreeProductWord, rng: random.Random) -> list[SimpleSurface]:
    out = []
    for _ in range(2):
        i, j = rng.randint(1, word.L), rng.randint(1, word.L)
        out.append(strip_surface(word, i, j)[0])
    cert = builtin_certificate(word)
    if cert is not None and cert.v <= 16:
        out.append(cert)
        if rng.random() < 0.3:
            out.append(finite_cover(cert, 2))
        if rng.random() < 0.3:
            out.append(approximate_by_tree(cert, 1))
    return out


def _components_ok(S: SimpleSurface) -> bool:
    return all(x >= 0 for x in S.component_chi_graph())


def scramble(S: SimpleSurface, rng: random.Random, steps: int) -> SimpleSurface:
    for _ in range(steps):
        if rng.random() < 0.6:
            by_type: dict = {}
            for k in range(S.e):
                by_type.setdefault(S.edge_type(k), []).append(k)
            choices = [es for es in by_type.values() if len(es) >= 2]
            if not choices:
                continue
            i, j = rng.sample(rng.choice(choices), 2)
            T = rewire(S, i, j)
        else:
            disks = [p for p, piece in enumerate(S.pieces) if piece.is_disk]
            if not disks:
                continue
            d = rng.choice(disks)
            D = S.pieces[d]
            others = [p for p, piece in enumerate(S.pieces) if p != d and piece.side == D.side]
            if not others:
                continue
            q = rng.choice(others)
            Q = S.pieces[q]
            options = [(s, t) for s in range(D.e) for t in range(Q.e)
                       if D.arcs[(s + 1) % D.e] == Q.arcs[(t + 1) % Q.e]]
            if not options:
                continue
            s_turn, t_turn = rng.choice(options)
            T = merge_pieces(S, d, s_turn, q, t_turn)
        if _components_ok(T):
            S = T
    return S


def random_surface(rng: random.Random, word: FreeProductWord | None = None,
                   steps: int = 8, max_parts: int = 2) -> SimpleSurface:
    word = word or random_word(rng)
    bases = base_surfaces(word, rng)
    S = rng.choice(bases)
    for _ in range(rng.randint(0, max_parts - 1)):
        S = S.disjoint_union(rng.choice(bases))
    return scramble(S, rng, steps)


def random_surfaces(seed: int, count: int, words: Sequence[FreeProductWord] | None = None,
                    steps: int = 8) -> list[SimpleSurface]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        word = words[k % len(words)] if words else None
        out.append(random_surface(rng, word, steps))
    return out
