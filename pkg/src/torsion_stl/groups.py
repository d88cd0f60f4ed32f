"""Finite groups given either as Z/n or by an explicit Cayley table.

Elements are plain integer indices; names are only used for display.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)

EXHAUSTIVE_CHECK_LIMIT = 512
SAMPLED_TRIPLES = 10_000


class GroupTableError(ValueError):
    """A Cayley table failed verification."""


@dataclass(frozen=True)
class FiniteGroup:
    kind: str  # "cyclic" or "table"
    order: int
    product: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)
    names: tuple[str, ...] = field(default=(), repr=False)
    identity: int = 0
    inverse: tuple[int, ...] = field(default=(), repr=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int, symbol: str = "g") -> FiniteGroup:
        if n < 1:
            raise ValueError(f"cyclic group needs a positive modulus, got {n}")
        names = tuple(_power_name(symbol, k) for k in range(n))
        inverse = tuple((-k) % n for k in range(n))
        return cls("cyclic", n, None, names, 0, inverse)

    @classmethod
    def from_table(cls, product: Sequence[Sequence[int]],
                   names: Sequence[str] | None = None,
                   seed: int = 0) -> FiniteGroup:
        """Build a table group, deriving identity and inverses and verifying the axioms."""
        table = tuple(tuple(int(v) for v in row) for row in product)
        n = len(table)
        if n == 0:
            raise GroupTableError("empty Cayley table")
        if any(len(row) != n for row in table):
            raise GroupTableError("Cayley table is not square")
        arr = np.asarray(table, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= n:
            raise GroupTableError("Cayley table entry out of range")
        identity = _find_identity(arr)
        inverse = _find_inverse(arr, identity)
        _check_associative(arr, seed)
        if names is None:
            names = [str(k) for k in range(n)]
        if len(names) != n:
            raise GroupTableError(f"expected {n} element names, got {len(names)}")
        return cls("table", n, table, tuple(names), identity, inverse)

    @classmethod
    def from_json(cls, data: dict | str | Path, symbol: str = "g") -> FiniteGroup:
        if isinstance(data, Path):
            data = json.loads(data.read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        kind = data.get("kind")
        if kind == "cyclic":
            return cls.cyclic(int(data["n"]), symbol)
        if kind == "table":
            g = cls.from_table(data["product"], data.get("names"))
            if "order" in data and int(data["order"]) != g.order:
                raise GroupTableError(f"declared order {data['order']} but table has {g.order} rows")
            return g
        raise ValueError(f"unknown group kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "n": self.order}
        return {"kind": "table", "order": self.order,
                "product": [list(r) for r in self.product], "names": list(self.names)}

    # -- arithmetic --------------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        if self.product is None:
            return (x + y) % self.order
        return self.product[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def prod(self, xs: Iterable[int]) -> int:
        acc = self.identity
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        acc = self.identity
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.order:
            raise IndexError(f"element index {x} out of range for group of order {self.order}")
        return int(x)

    def name(self, x: int) -> str:
        return self.names[x]

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        if self.product is None:
            return True
        n = self.order
        return all(self.product[x][y] == self.product[y][x]
                   for x in range(n) for y in range(x + 1, n))

    def as_table(self) -> FiniteGroup:
        """The table group induced by this group (identity for table groups)."""
        if self.product is not None:
            return self
        n = self.order
        return FiniteGroup.from_table([[(x + y) % n for y in range(n)] for x in range(n)],
                                      self.names)


def _power_name(symbol: str, k: int) -> str:
    if k == 0:
        return "e"
    if k == 1:
        return symbol
    return f"{symbol}^{k}"


def _find_identity(arr: np.ndarray) -> int:
    n = arr.shape[0]
    idx = np.arange(n)
    for e in range(n):
        if (arr[e] == idx).all() and (arr[:, e] == idx).all():
            return e
    raise GroupTableError("no two-sided identity in Cayley table")


def _find_inverse(arr: np.ndarray, identity: int) -> tuple[int, ...]:
    n = arr.shape[0]
    inverse = []
    for x in range(n):
        hits = np.nonzero(arr[x] == identity)[0]
        if len(hits) != 1:
            raise GroupTableError(f"element {x} has {len(hits)} right inverses")
        y = int(hits[0])
        if arr[y, x] != identity:
            raise GroupTableError(f"inverse of {x} is not two-sided")
        inverse.append(y)
    return tuple(inverse)


def _check_associative(arr: np.ndarray, seed: int) -> None:
    n = arr.shape[0]
    if n <= EXHAUSTIVE_CHECK_LIMIT:
        for a in range(n):
            # (a*b)*c versus a*(b*c) for all b, c
            left = arr[arr[a]]
            right = arr[a][arr]
            bad = np.argwhere(left != right)
            if len(bad):
                b, c = (int(v) for v in bad[0])
                raise GroupTableError(f"associativity fails for triple ({a}, {b}, {c})")
        return
    log.warning("Cayley table of order %d: sampling %d associativity triples instead of "
                "checking all of them", n, SAMPLED_TRIPLES)
    rng = random.Random(seed)
    for _ in range(SAMPLED_TRIPLES):
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if arr[arr[a, b], c] != arr[a, arr[b, c]]:
            raise GroupTableError(f"associativity fails for triple ({a}, {b}, {c})")


def element_order(group: FiniteGroup, x: int) -> int:
    x = group.check(x)
    k, acc = 1, x
    while acc != group.identity:
        acc = group.mul(acc, x)
        k += 1
    return k


def subgroup_closure(group: FiniteGroup, generators: Iterable[int]) -> frozenset[int]:
    elems = {group.identity}
    frontier = [group.check(g) for g in generators]
    gens = list(frontier)
    while frontier:
        new = []
        for x in frontier:
            if x in elems:
                continue
            elems.add(x)
            new.extend(group.mul(x, g) for g in gens)
        frontier = new
    # in a finite group closure under products already contains inverses
    return frozenset(elems)


# -- built-in tables -------------------------------------------------------

def _s3_data() -> tuple[list[list[int]], list[str]]:
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    names = ["e", "(12)", "(23)", "(123)", "(132)", "(13)"]
    index = {p: i for i, p in enumerate(perms)}
    # x*y means apply y first, then x
    table = [[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    return table, names


def symmetric_group_s3() -> FiniteGroup:
    """S3 on {1,2,3}; index 1 is the transposition (12), index 3 the 3-cycle (123)."""
    table, names = _s3_data()
    return FiniteGroup.from_table(table, names)


def builtin_tables() -> dict[str, FiniteGroup]:
    return {"S3": symmetric_group_s3()}


def parse_group_spec(spec: str, symbol: str = "g") -> FiniteGroup:
    """Parse `cyclic:N`, a built-in table name, or a path to group JSON."""
    spec = spec.strip()
    if spec.lower().startswith("cyclic:"):
        return FiniteGroup.cyclic(int(spec.split(":", 1)[1]), symbol)
    tables = builtin_tables()
    if spec.upper() in tables:
        return tables[spec.upper()]
    path = Path(spec.lstrip("@"))
    if path.exists():
        return FiniteGroup.from_json(path, symbol)
    if spec.startswith("{"):
        return FiniteGroup.from_json(spec, symbol)
    raise ValueError(f"cannot interpret group spec {spec!r}")
