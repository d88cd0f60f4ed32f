"""Formula-versus-computed checks runnable from the command line."""
from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TextIO

from .certify import compute_stl
from .constructions import (certificate_commutator, certificate_product, commutator_formula,
                            product_formula)
from .groups import builtin_tables
from .pieces import commutator_word, product_word
from .randomized import random_surfaces
from .rewrite import reduce_with_trace
from .surfaces import kappa
from .words import FreeProduct


@dataclass
class Row:
    name: str
    expected: str
    computed: str
    ok: bool
    seconds: float


def _timed(name: str, expected: Fraction | str, fn: Callable[[], Fraction | str]) -> Row:
    t = time.perf_counter()
    try:
        got = fn()
        ok = str(got) == str(expected)
    except Exception as exc:  # a failing case is reported, not raised
        got, ok = f"error: {exc}", False
    return Row(name, str(expected), str(got), ok, time.perf_counter() - t)


def _stl_exact(word) -> Fraction | str:
    r = compute_stl(word.syllables, word.groups)
    return r.lower_bound if r.exact else f"bounds {r.lower_bound}..{r.upper_bound}"


def _rewrite_props(seed: int, count: int) -> str:
    for S in random_surfaces(seed, count):
        comps, steps = reduce_with_trace(S)
        for st in steps:
            drop = st.kappa_before - st.kappa_after
            if (st.kind == "split" and drop not in (1, 2)) or (st.kind != "split" and drop != 1):
                return f"kappa dropped by {drop} under {st.kind}"
        if len(steps) > kappa(S):
            return "too many steps"
        if min(C.ratio for C in comps if C.degree) > S.ratio:
            return "ratio increased"
    return "ok"


def run_selftest(quick: bool = False, seed: int = 0, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    rows: list[Row] = []
    rows.append(_timed("built-in Cayley tables", "verified", _verify_tables))
    top = 3 if quick else 5
    for p in range(2, top + 1):
        for q in range(2, top + 1):
            rows.append(_timed(f"commutator p={p} q={q}", commutator_formula(p, q),
                               lambda p=p, q=q: _stl_exact(commutator_word(p, q))))
    top = 3 if quick else 6
    for p in range(2, top + 1):
        for q in range(p, top + 1):
            rows.append(_timed(f"product p={p} q={q}", product_formula(p, q),
                               lambda p=p, q=q: _stl_exact(product_word(p, q))))

    def s3() -> Fraction | str:
        S3 = builtin_tables()["S3"]
        G = FreeProduct(S3, S3)
        r = compute_stl((("A", 1), ("B", 3)), G)
        return r.lower_bound if r.exact else "not exact"

    rows.append(_timed("S3 x S3 word (12)(123)", Fraction(1, 4), s3))
    if not quick:
        rows.append(_timed("certificate commutator 5,5", "8 6",
                           lambda: f"{certificate_commutator(5, 5).degree} "
                                   f"{certificate_commutator(5, 5).neg_chi}"))
        rows.append(_timed("certificate product 4,5", "16 11",
                           lambda: f"{certificate_product(4, 5).degree} "
                                   f"{certificate_product(4, 5).neg_chi}"))
    rows.append(_timed("rewrite properties", "ok",
                       lambda: _rewrite_props(seed, 20 if quick else 100)))
    width = max(len(r.name) for r in rows)
    out.write(f"{'case':<{width}}  {'expected':>10}  {'computed':>10}  status\n")
    for r in rows:
        out.write(f"{r.name:<{width}}  {r.expected:>10}  {r.computed:>10}  "
                  f"{'ok' if r.ok else 'FAIL'}\n")
    failed = [r for r in rows if not r.ok]
    if failed:
        out.write(f"{len(failed)} case(s) failed; first: {failed[0].name}: {failed[0].computed}\n")
        return 1
    out.write(f"all {len(rows)} cases passed\n")
    return 0


def _verify_tables() -> str:
    builtin_tables()  # every table is re-verified on construction
    return "verified"
