"""Arcs, turns, piece types and piece collections for a word g = a1 b1 ... aL bL."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .groups import FiniteGroup, element_order
from .words import FreeProduct, FreeProductWord

ENUMERATION_CAP = 1_000_000


class CollectionCapError(RuntimeError):
    """Raised when a generic collection would be too large to enumerate."""


class ArcLabel(NamedTuple):
    side: str
    index: int


class TurnType(NamedTuple):
    side: str
    src: int
    dst: int

    def __str__(self) -> str:
        return f"{self.side}({self.src},{self.dst})"


def all_turn_types(word: FreeProductWord) -> list[TurnType]:
    L = word.L
    return [TurnType(side, i, j) for side in "AB"
            for i in range(1, L + 1) for j in range(1, L + 1)]


def compatible(t: TurnType, L: int) -> TurnType:
    """(A, i, j) pairs with (B, j-1, i); indices live in 1..L."""
    if t.side == "A":
        return TurnType("B", (t.dst - 2) % L + 1, t.src)
    # inverse of the map above: (B, k, l) comes from (A, l, k+1)
    return TurnType("A", t.dst, t.src % L + 1)


def canonical_rotation(arcs: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Least rotation and a shift with rotated[t] == arcs[(t + shift) % e]."""
    arcs = tuple(arcs)
    e = len(arcs)
    best, shift = arcs, 0
    for s in range(1, e):
        rot = arcs[s:] + arcs[:s]
        if rot < best:
            best, shift = rot, s
    return best, shift


def rotation_period(arcs: Sequence[int]) -> int:
    e = len(arcs)
    arcs = tuple(arcs)
    for per in range(1, e + 1):
        if e % per == 0 and arcs[per:] + arcs[:per] == arcs:
            return per
    return e


@dataclass(frozen=True)
class PieceType:
    side: str
    arcs: tuple[int, ...]
    winding: int
    shape: str  # "disk" or "annulus"

    @property
    def e(self) -> int:
        return len(self.arcs)

    @property
    def is_disk(self) -> bool:
        return self.shape == "disk"

    @property
    def chi(self) -> int:
        return 1 if self.is_disk else 0

    @property
    def key(self) -> str:
        return self.side + "_" + "_".join(str(a) for a in self.arcs)

    def turn(self, k: int) -> TurnType:
        e = self.e
        return TurnType(self.side, self.arcs[k % e], self.arcs[(k + 1) % e])

    def turns(self) -> list[TurnType]:
        return [self.turn(k) for k in range(self.e)]

    def count_arc(self, index: int) -> int:
        return sum(1 for a in self.arcs if a == index)

    def period(self) -> int:
        return rotation_period(self.arcs)

    def __str__(self) -> str:
        return f"{self.side}{list(self.arcs)}"


def winding_of(side: str, arcs: Sequence[int], word: FreeProductWord) -> int:
    grp = word.factor(side)
    return grp.prod(word.letter(side, i) for i in arcs)


def make_piece(side: str, arcs: Sequence[int], word: FreeProductWord) -> PieceType:
    if side not in ("A", "B"):
        raise ValueError(f"unknown side {side!r}")
    arcs = tuple(int(a) for a in arcs)
    if not arcs:
        raise ValueError("a piece needs at least one arc")
    for a in arcs:
        if not 1 <= a <= word.L:
            raise ValueError(f"arc index {a} outside 1..{word.L}")
    canon, _ = canonical_rotation(arcs)
    grp = word.factor(side)
    w = winding_of(side, canon, word)
    shape = "disk" if w == grp.identity else "annulus"
    # every element of a finite group is torsion, so annuli are always admissible
    return PieceType(side, canon, w, shape)


def piece_sort_key(p: PieceType) -> tuple:
    return (p.side, p.e, p.arcs)


@dataclass(frozen=True)
class PieceCollection:
    word: FreeProductWord
    pieces: tuple[PieceType, ...]
    provenance: str

    def __post_init__(self):
        keys = [(p.side, p.arcs) for p in self.pieces]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate piece types in collection")

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[PieceType]:
        return iter(self.pieces)

    def index(self) -> dict[tuple[str, tuple[int, ...]], int]:
        return {(p.side, p.arcs): k for k, p in enumerate(self.pieces)}

    def to_json(self) -> list[dict]:
        return [{"side": p.side, "arcs": list(p.arcs),
                 "winding": self.word.factor(p.side).name(p.winding), "shape": p.shape}
                for p in self.pieces]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: list[dict], word: FreeProductWord,
                  provenance: str = "user") -> PieceCollection:
        return make_collection(word, ((d["side"], d["arcs"]) for d in data), provenance)


def make_collection(word: FreeProductWord, specs: Iterable[tuple[str, Sequence[int]]],
                    provenance: str) -> PieceCollection:
    seen: dict[tuple[str, tuple[int, ...]], PieceType] = {}
    for side, arcs in specs:
        p = make_piece(side, arcs, word)
        seen.setdefault((p.side, p.arcs), p)
    pieces = tuple(sorted(seen.values(), key=piece_sort_key))
    return PieceCollection(word, pieces, provenance)


# -- necklaces ---------------------------------------------------------------

def _totient(n: int) -> int:
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result


def necklace_count(n: int, k: int) -> int:
    """Number of k-ary necklaces of length n."""
    total = sum(_totient(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def necklaces(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Least representatives of k-ary necklaces of length n over 1..k, in lex order."""
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if n % m == 0:
            yield tuple(x + 1 for x in w) * (n // m)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()


def projected_sequences(L: int, max_turns_a: int, max_turns_b: int) -> int:
    return (sum(necklace_count(n, L) for n in range(1, max_turns_a + 1))
            + sum(necklace_count(n, L) for n in range(1, max_turns_b + 1)))


def default_max_turns(word: FreeProductWord, side: str) -> int:
    return word.factor(side).order * word.L ** 2


def generic_bounded_collection(word: FreeProductWord, max_turns: int | None = None,
                               override_caps: bool = False,
                               cap: int = ENUMERATION_CAP) -> PieceCollection:
    """Every piece with at most max_turns turns on each side."""
    ma = max_turns if max_turns is not None else default_max_turns(word, "A")
    mb = max_turns if max_turns is not None else default_max_turns(word, "B")
    if ma < 1 or mb < 1:
        raise ValueError("max_turns must be positive")
    projected = projected_sequences(word.L, ma, mb)
    if projected > cap and not override_caps:
        raise CollectionCapError(
            f"generic collection would enumerate {projected} sequences (cap {cap}); "
            "lower --max-turns or pass --override-caps")
    specs = []
    for side, m in (("A", ma), ("B", mb)):
        for n in range(1, m + 1):
            specs.extend((side, arcs) for arcs in necklaces(n, word.L))
    label = f"generic-bounded(max_turns={max_turns})" if max_turns is not None \
        else f"generic-bounded(max_turns={ma},{mb})"
    return make_collection(word, specs, label)


# -- the two worked families --------------------------------------------------

def product_word(p: int, q: int) -> FreeProductWord:
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    G = FreeProduct(FiniteGroup.cyclic(p, "a"), FiniteGroup.cyclic(q, "b"))
    return FreeProductWord(G, (("A", 1), ("B", 1)))


def commutator_word(p: int, q: int) -> FreeProductWord:
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    G = FreeProduct(FiniteGroup.cyclic(p, "a"), FiniteGroup.cyclic(q, "b"))
    return G.word((("A", 1), ("B", 1), ("A", p - 1), ("B", q - 1)))


def match_pattern(word: FreeProductWord) -> tuple[str, int, int] | None:
    """Detect the shapes a*b and a*b*a^-1*b^-1, returning (kind, |a|, |b|)."""
    A, B = word.factor("A"), word.factor("B")
    if word.L == 1:
        return ("product", element_order(A, word.a(1)), element_order(B, word.b(1)))
    if word.L == 2 and word.a(2) == A.inv(word.a(1)) and word.b(2) == B.inv(word.b(1)):
        return ("commutator", element_order(A, word.a(1)), element_order(B, word.b(1)))
    return None


def _commutator_specs(p: int, q: int) -> list[tuple[str, tuple[int, ...]]]:
    specs = []
    for side, m in (("A", p), ("B", q)):
        for n in range(1, m + 1):
            specs.append((side, (1,) * n))
            specs.append((side, (2,) * n))
            specs.append((side, (1,) * n + (2,) * n))
    return specs


def _product_specs(p: int, q: int) -> list[tuple[str, tuple[int, ...]]]:
    return ([("A", (1,) * n) for n in range(1, p + 1)]
            + [("B", (1,) * n) for n in range(1, q + 1)])


def commutator_collection(p: int, q: int, word: FreeProductWord | None = None) -> PieceCollection:
    """P_n^+, P_n^-, R_n for n <= p and Q_n^+, Q_n^-, T_n for n <= q."""
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    word = word or commutator_word(p, q)
    return make_collection(word, _commutator_specs(p, q), "commutator-builtin")


def product_collection(p: int, q: int, word: FreeProductWord | None = None) -> PieceCollection:
    """P_1..P_p and Q_1..Q_q."""
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    word = word or product_word(p, q)
    return make_collection(word, _product_specs(p, q), "product-builtin")


def builtin_collection(word: FreeProductWord) -> PieceCollection | None:
    """The worked-family collection for a word matching one of the two patterns."""
    m = match_pattern(word)
    if m is None:
        return None
    kind, p, q = m
    if kind == "product":
        return product_collection(p, q, word)
    return commutator_collection(p, q, word)


def pieces_named(collection: PieceCollection) -> dict[str, PieceType]:
    return {p.key: p for p in collection.pieces}
