"""Words in a free product A * B of two finite groups.

A syllable is a pair ``(side, element)`` with side ``"A"`` or ``"B"``.  Raw
words are plain tuples of syllables; :class:`FreeProductWord` is the
cyclically reduced, canonically rotated form a1 b1 ... aL bL.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .groups import FiniteGroup

Syllable = tuple[str, int]
RawWord = tuple[Syllable, ...]

SIDES = ("A", "B")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int, line: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.text = text
        self.line = line
        self.column = column


@dataclass(frozen=True)
class FreeProduct:
    A: FiniteGroup
    B: FiniteGroup

    def factor(self, side: str) -> FiniteGroup:
        if side == "A":
            return self.A
        if side == "B":
            return self.B
        raise ValueError(f"unknown factor {side!r}")

    def check(self, raw: Iterable[Syllable]) -> RawWord:
        return tuple((side, self.factor(side).check(x)) for side, x in raw)

    def free_reduce(self, raw: Iterable[Syllable]) -> RawWord:
        """Normal form: merge adjacent same-factor syllables and drop identities."""
        out: list[Syllable] = []
        for side, x in self.check(raw):
            grp = self.factor(side)
            if x == grp.identity:
                continue
            if out and out[-1][0] == side:
                y = grp.mul(out[-1][1], x)
                out.pop()
                if y != grp.identity:
                    out.append((side, y))
            else:
                out.append((side, x))
        return tuple(out)

    def inverse(self, raw: Sequence[Syllable]) -> RawWord:
        return tuple((side, self.factor(side).inv(x)) for side, x in reversed(raw))

    def conjugate(self, conjugator: Sequence[Syllable], raw: Sequence[Syllable]) -> RawWord:
        return tuple(conjugator) + tuple(raw) + self.inverse(conjugator)

    def cyclically_reduce(self, raw: Iterable[Syllable]
                          ) -> tuple[RawWord, Union[FreeProductWord, Syllable, None]]:
        """Split a word as conjugator * core * conjugator^-1.

        The core is ``None`` (identity), a single syllable, or a
        :class:`FreeProductWord` in canonical rotation.
        """
        w = list(self.free_reduce(raw))
        conj: list[Syllable] = []
        while len(w) >= 2 and w[0][0] == w[-1][0]:
            side = w[0][0]
            grp = self.factor(side)
            first = w.pop(0)
            last = w.pop()
            conj.append(first)
            merged = grp.mul(last[1], first[1])
            if merged != grp.identity:
                w.append((side, merged))
        if not w:
            return self.free_reduce(conj), None
        if len(w) == 1:
            return self.free_reduce(conj), w[0]
        k = canonical_rotation_offset(w)
        core = FreeProductWord(self, tuple(w[k:] + w[:k]))
        return self.free_reduce(conj + w[:k]), core

    def word(self, raw: Iterable[Syllable]) -> FreeProductWord:
        """The cyclically reduced core of a word that is not conjugate into a factor."""
        _, core = self.cyclically_reduce(raw)
        if not isinstance(core, FreeProductWord):
            raise ValueError("word is conjugate into a factor group")
        return core

    def power(self, raw: Sequence[Syllable], n: int) -> RawWord:
        return self.free_reduce(tuple(raw) * n)

    def verify_factorization(self, g: FreeProductWord, f: TorsionFactorization) -> bool:
        """True iff the product of the conjugated torsion factors equals g^n."""
        if f.power < 1:
            return False
        pieces: list[Syllable] = []
        for conj, (side, x) in f.factors:
            grp = self.factor(side)
            if x == grp.identity:
                return False
            pieces.extend(self.conjugate(conj, [(side, x)]))
        return self.free_reduce(pieces) == self.power(g.syllables, f.power)

    def format(self, raw: Iterable[Syllable]) -> str:
        parts = [f"{side}:{self.factor(side).name(x)}" for side, x in raw]
        return " ".join(parts) if parts else "e"

    def parse(self, text: str) -> RawWord:
        return parse_word(text, self)


def canonical_rotation_offset(syllables: Sequence[Syllable]) -> int:
    """Offset of the lexicographically least A-first rotation."""
    n = len(syllables)
    best = None
    for k in range(0, n):
        if syllables[k][0] != "A":
            continue
        rot = tuple(syllables[k:]) + tuple(syllables[:k])
        if best is None or rot < best[0]:
            best = (rot, k)
    assert best is not None
    return best[1]


@dataclass(frozen=True)
class FreeProductWord:
    groups: FreeProduct
    syllables: RawWord

    def __post_init__(self):
        s = self.syllables
        if not s or len(s) % 2:
            raise ValueError("a cyclically reduced word has even positive length")
        for k, (side, x) in enumerate(s):
            if side != SIDES[k % 2]:
                raise ValueError("syllables must alternate A, B starting with A")
            grp = self.groups.factor(side)
            grp.check(x)
            if x == grp.identity:
                raise ValueError("identity syllable in reduced word")

    @property
    def L(self) -> int:
        return len(self.syllables) // 2

    def a(self, i: int) -> int:
        """Element of the A-syllable with 1-based index i."""
        return self.syllables[2 * (i - 1)][1]

    def b(self, i: int) -> int:
        return self.syllables[2 * i - 1][1]

    def letter(self, side: str, i: int) -> int:
        return self.a(i) if side == "A" else self.b(i)

    def factor(self, side: str) -> FiniteGroup:
        return self.groups.factor(side)

    def __str__(self) -> str:
        return self.groups.format(self.syllables)


@dataclass(frozen=True)
class TorsionFactorization:
    """g^power as a product of conjugates of torsion syllables."""
    power: int
    factors: tuple[tuple[RawWord, Syllable], ...]

    def __len__(self) -> int:
        return len(self.factors)

    def to_json(self, groups: FreeProduct | None = None) -> dict:
        def syl(s: Syllable) -> list:
            return [s[0], s[1]]
        out = {"power": self.power,
               "factors": [{"conjugator": [syl(s) for s in c], "torsion": syl(t)}
                           for c, t in self.factors]}
        if groups is not None:
            out["text"] = [f"({groups.format(c)}) {groups.format([t])} ({groups.format(c)})^-1"
                           for c, t in self.factors]
        return out

    @classmethod
    def from_json(cls, data: dict) -> TorsionFactorization:
        factors = tuple((tuple((s, int(x)) for s, x in f["conjugator"]),
                         (f["torsion"][0], int(f["torsion"][1])))
                        for f in data["factors"])
        return cls(int(data["power"]), factors)


_TOKEN = re.compile(r"\s*(?:(?P<gen>[ab])|(?P<side>[AB]):(?P<idx>\d+))(?:\^(?P<exp>-?\d+))?")


def parse_word(text: str, groups: FreeProduct) -> RawWord:
    """Parse ``a b a^-1 b^-1`` or ``A:3 B:1^2`` into a raw word.

    ``a``/``b`` name the generator (element index 1) of a cyclic factor.
    """
    out: list[Syllable] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or (m.end() < len(text) and not text[m.end()].isspace()):
            raise WordSyntaxError(f"unexpected input {text[pos:pos + 8]!r}", text, pos + 1)
        exp = int(m.group("exp")) if m.group("exp") else 1
        if m.group("gen"):
            side = m.group("gen").upper()
            grp = groups.factor(side)
            if grp.kind != "cyclic":
                raise WordSyntaxError(
                    f"generator '{m.group('gen')}' only names cyclic factors; use {side}:<index>",
                    text, pos + 1)
            base = 1 % grp.order
        else:
            side = m.group("side")
            grp = groups.factor(side)
            base = int(m.group("idx"))
            if base >= grp.order:
                raise WordSyntaxError(f"element index {base} out of range for factor {side}",
                                      text, pos + 1)
        out.append((side, grp.pow(base, exp)))
        pos = m.end()
    return tuple(out)
