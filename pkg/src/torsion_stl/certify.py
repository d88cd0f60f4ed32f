"""End-to-end stl computation and extraction of explicit torsion factorizations."""
from __future__ import annotations

import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .assembly import assemble_from_vector
from .constructions import approximate_by_tree, builtin_certificate, strip_surface
from .enumeration import DEFAULT_MAX_PIECES, EnumerationCapError, enumerate_small_surfaces
from .lp import RationalLP, build_polyhedron, solve_exact, verify_certificate
from .pieces import (PieceCollection, builtin_collection, generic_bounded_collection,
                     make_collection)
from .rewrite import reduce_to_irreducible
from .surfaces import SimpleSurface, SurfaceError
from .words import FreeProduct, FreeProductWord, RawWord, Syllable, TorsionFactorization

log = logging.getLogger(__name__)


class ExtractionError(RuntimeError):
    pass


# -- factorization ------------------------------------------------------------------

def extract_factorization(S: SimpleSurface) -> TorsionFactorization:
    """g^n as a product of conjugates of hole classes, one factor per annulus piece.

    The single boundary of a tree surface, read from an alpha_1 arc of a
    root piece, is x_0 W_0 x_1 W_1 ... where W_k is the boundary of the
    subtree hanging off turn k.  Writing X_k = x_0 ... x_k this equals
    (X_1 W_0 X_1^-1)(X_2 W_1 X_2^-1) ... X_e, and each W_k expands the same
    way, so every piece contributes its rotated winding class conjugated by
    the boundary prefix in front of it.
    """
    if not S.is_connected() or S.chi_graph != 1:
        raise ExtractionError("factorizations are read off tree surfaces")
    G = S.word.groups
    root, start = next((p, k) for p, piece in enumerate(S.pieces) if piece.side == "A"
                       for k, a in enumerate(piece.arcs) if a == 1)

    def arc(p: int, k: int) -> Syllable:
        piece = S.pieces[p]
        return (piece.side, S.word.letter(piece.side, piece.arcs[k % piece.e]))

    factors: list[tuple[RawWord, Syllable]] = []

    def walk(prefix: tuple[Syllable, ...], p: int, first: int, is_root: bool) -> None:
        # factors of subtrees come first, left to right, then the piece's own winding
        piece = S.pieces[p]
        X: list[Syllable] = []
        for step in range(piece.e):
            k = (first + step) % piece.e
            X.append(arc(p, k))
            if step == piece.e - 1 and not is_root:
                break  # the last turn of a non-root piece leads back to its parent
            q, m = S.partner[(p, k)]
            walk(prefix + tuple(X), q, (m + 1) % S.pieces[q].e, False)
        grp = S.word.factor(piece.side)
        w = grp.prod(x for _, x in X)
        if w != grp.identity:
            factors.append((G.free_reduce(prefix), (piece.side, w)))

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * S.v + 100))
    try:
        walk((), root, start, True)
    finally:
        sys.setrecursionlimit(limit)
    f = TorsionFactorization(S.degree, tuple(factors))
    if len(f.factors) != S.H:
        raise ExtractionError(f"expected {S.H} factors, produced {len(f.factors)}")
    if not G.verify_factorization(S.word, f):
        raise ExtractionError("extracted factorization does not verify")
    return f


# -- tl upper bounds ------------------------------------------------------------------------

def _tree_bases(word: FreeProductWord) -> list[tuple[int, int]]:
    """(degree, holes) of available tree surfaces, plus the trivial factorization of g."""
    bases = {(1, 2 * word.L)}
    seen_types = set()
    for i in range(1, word.L + 1):
        for j in range(1, word.L + 1):
            if (i, j) in seen_types:
                continue
            seen_types.add((i, j))
            S, _ = strip_surface(word, i, j)
            bases.add((S.degree, S.H))
    cert = builtin_certificate(word)
    if cert is not None:
        for k in (1, 2, 3):
            T = approximate_by_tree(cert, k)
            bases.add((T.degree, T.H))
    return sorted(bases)


def tl_upper_bound(word: FreeProductWord | None, n: int) -> int | None:
    """Upper bound on the torsion length of g^n from tree surfaces, combined additively.

    ``word=None`` stands for a word conjugate into a factor, i.e. a torsion element.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if word is None:
        return 1  # torsion words are a single torsion element
    bases = _tree_bases(word)
    INF = float("inf")
    best = [0] + [INF] * n
    for m in range(1, n + 1):
        for deg, holes in bases:
            if deg <= m and best[m - deg] + holes < best[m]:
                best[m] = best[m - deg] + holes
    return None if best[n] == INF else int(best[n])


# -- the pipeline -------------------------------------------------------------------------

@dataclass
class StlOptions:
    collection: str = "auto"  # auto | builtin | generic | file
    collection_data: list | None = None
    max_turns: int | None = None
    max_pieces: int = DEFAULT_MAX_PIECES
    override_caps: bool = False
    enumerate: bool = True
    factorization: bool = True


@dataclass
class StlReport:
    word: str
    provenance: str
    lower_bound: Fraction
    upper_bound: Fraction | None
    exact: bool
    certificate: SimpleSurface | None = None
    certificate_source: str | None = None
    factorization: TorsionFactorization | None = None
    lp_value: Fraction | None = None
    timings: dict = field(default_factory=dict)
    groups: FreeProduct | None = None
    lp_dual_ok: bool = True

    @property
    def value(self) -> Fraction | None:
        return self.lower_bound if self.exact else None

    def to_json(self) -> dict:
        def q(x):
            return None if x is None else {"num": x.numerator, "den": x.denominator}
        out = {"word": self.word, "collection": self.provenance,
               "lower_bound": q(self.lower_bound), "upper_bound": q(self.upper_bound),
               "exact": self.exact, "value": q(self.value),
               "certificate_source": self.certificate_source}
        if self.groups is not None:
            out["groups"] = {"A": self.groups.A.to_json(), "B": self.groups.B.to_json()}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
            out["certificate_stats"] = {"neg_chi": self.certificate.neg_chi,
                                        "degree": self.certificate.degree,
                                        "chi_graph": self.certificate.chi_graph}
        if self.factorization is not None:
            out["factorization"] = self.factorization.to_json(self.groups)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def choose_collection(word: FreeProductWord, options: StlOptions) -> PieceCollection:
    kind = options.collection
    if kind == "file":
        if options.collection_data is None:
            raise ValueError("collection 'file' needs collection data")
        return make_collection(word, ((d["side"], d["arcs"]) for d in options.collection_data),
                               "user")
    if kind in ("auto", "builtin"):
        coll = builtin_collection(word)
        if coll is not None:
            return coll
        if kind == "builtin":
            raise ValueError("word matches neither a*b nor a*b*a^-1*b^-1")
    elif kind != "generic":
        raise ValueError(f"unknown collection choice {kind!r}")
    return generic_bounded_collection(word, options.max_turns, options.override_caps)


def _surface_candidates(S: SimpleSurface) -> list[SimpleSurface]:
    """Connected pieces of S usable as upper-bound certificates (chi(Gamma) in {0, 1})."""
    if any(x < 0 for x in S.component_chi_graph()):
        return []
    return [C for C in reduce_to_irreducible(S) if C.chi_graph in (0, 1)]


def compute_stl(raw: Sequence[Syllable], groups: FreeProduct,
                options: StlOptions | None = None, text: str | None = None) -> StlReport:
    options = options or StlOptions()
    timings: dict = {}
    t0 = time.perf_counter()
    _, core = groups.cyclically_reduce(raw)
    label = text if text is not None else groups.format(raw)
    if not isinstance(core, FreeProductWord):
        # conjugate into a finite factor, hence torsion
        return StlReport(label, "torsion", Fraction(0), Fraction(0), True, groups=groups,
                         certificate_source="torsion")
    word = core
    collection = choose_collection(word, options)
    timings["collection"] = time.perf_counter() - t0
    lp = build_polyhedron(collection)
    sol = solve_exact(lp)
    if sol.status != "optimal":
        raise RuntimeError("the LP over this collection is infeasible")
    timings["lp"] = time.perf_counter() - t0
    lower = sol.value
    best: tuple[Fraction, SimpleSurface, str] | None = None

    def offer(S: SimpleSurface, source: str) -> None:
        nonlocal best
        if S.degree == 0 or not S.is_connected() or S.chi_graph not in (0, 1):
            return
        if best is None or S.ratio < best[0]:
            best = (S.ratio, S, source)

    cert = builtin_certificate(word)
    if cert is not None:
        offer(cert, "builtin-family")
    if best is None or best[0] != lower:
        try:
            assembled = assemble_from_vector(sol.vertex, collection)
            for C in _surface_candidates(assembled):
                offer(C, "lp-vertex")
        except (ValueError, SurfaceError) as exc:
            log.info("vertex assembly failed: %s", exc)
    if options.enumerate and (best is None or best[0] != lower):
        try:
            for S in enumerate_small_surfaces(collection, options.max_pieces):
                offer(S, "enumeration")
                if best[0] == lower:
                    break
        except EnumerationCapError as exc:
            log.info("enumeration skipped: %s", exc)
    timings["upper"] = time.perf_counter() - t0
    upper = best[0] if best else None
    if upper is not None and upper < lower:
        raise AssertionError(f"certificate ratio {upper} below LP bound {lower}")
    exact = upper is not None and upper == lower
    report = StlReport(label, collection.provenance, lower, upper, exact,
                       certificate=best[1] if best else None,
                       certificate_source=best[2] if best else None,
                       lp_value=lower, timings=timings, groups=groups,
                       lp_dual_ok=not verify_certificate(lp, sol))
    if options.factorization and best is not None:
        try:
            tree = best[1] if best[1].chi_graph == 1 else approximate_by_tree(best[1], 1)
            report.factorization = extract_factorization(tree)
        except (ExtractionError, SurfaceError) as exc:
            log.info("no factorization: %s", exc)
    return report


def revalidate(data: dict, word: FreeProductWord) -> Fraction:
    """Rebuild a serialized certificate and return its ratio."""
    S = SimpleSurface.from_json(data["certificate"], word)
    return S.ratio


def collection_lp(word: FreeProductWord, options: StlOptions | None = None) -> RationalLP:
    return build_polyhedron(choose_collection(word, options or StlOptions()))
