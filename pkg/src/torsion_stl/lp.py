"""The rational polyhedron of normalized gluing-consistent piece vectors, solved exactly.

The solver is a dense-tableau two-phase simplex over ``Fraction`` with
Bland's rule.  Every optimum comes with a dual vector that is re-checked
from scratch, so correctness does not depend on the pivot path.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .pieces import PieceCollection, all_turn_types, compatible

BRUTE_FORCE_MAX_VARS = 12


class LPInfeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[Fraction, ...]
    op: str  # "=", ">=", "<="
    rhs: Fraction


@dataclass(frozen=True)
class RationalLP:
    variables: tuple[str, ...]
    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]

    @property
    def n(self) -> int:
        return len(self.variables)

    def equalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.op == "="]

    def inequalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.op != "="]

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return not self.violations(x)

    def violations(self, x: Sequence[Fraction]) -> list[str]:
        bad = []
        if len(x) != self.n:
            return [f"expected {self.n} coordinates, got {len(x)}"]
        for name, v in zip(self.variables, x):
            if v < 0:
                bad.append(f"{name} < 0")
        for c in self.constraints:
            lhs = sum((a * v for a, v in zip(c.coeffs, x)), Fraction(0))
            ok = {"=": lhs == c.rhs, ">=": lhs >= c.rhs, "<=": lhs <= c.rhs}[c.op]
            if not ok:
                bad.append(f"{c.name}: {lhs} {c.op} {c.rhs} fails")
        return bad


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" or "infeasible"
    value: Fraction | None = None
    vertex: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()  # one entry per constraint, in lp.constraints order
    variables: tuple[str, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == "optimal":
            out["value"] = str(self.value)
            out["vertex"] = {k: str(v) for k, v in zip(self.variables, self.vertex)}
            out["dual"] = [str(y) for y in self.dual]
        return out


# -- building -------------------------------------------------------------------

def chi_graph_coeff(e: int) -> Fraction:
    return 1 - Fraction(e, 2)


def chi_o_coeff(chi: int, e: int) -> Fraction:
    return chi - Fraction(e, 2)


def build_polyhedron(collection: PieceCollection) -> RationalLP:
    """Variables are the collection's pieces; minimize -chi_o over C_P."""
    word = collection.word
    L = word.L
    pieces = collection.pieces
    if not pieces:
        raise ValueError("empty collection")
    turn_counts = []
    for p in pieces:
        counts: dict = {}
        for t in p.turns():
            counts[t] = counts.get(t, 0) + 1
        turn_counts.append(counts)
    rows = []
    for t in all_turn_types(word):
        if t.side != "A":
            continue
        tb = compatible(t, L)
        coeffs = tuple(Fraction(c.get(t, 0) - c.get(tb, 0)) for c in turn_counts)
        rows.append(Constraint(f"glue_{t.side}_{t.src}_{t.dst}", coeffs, "=", Fraction(0)))
    norm = tuple(Fraction(p.count_arc(1) if p.side == "A" else 0) for p in pieces)
    rows.append(Constraint("norm", norm, "=", Fraction(1)))
    rows.append(Constraint("chi_graph", tuple(chi_graph_coeff(p.e) for p in pieces),
                           ">=", Fraction(0)))
    objective = tuple(-chi_o_coeff(p.chi, p.e) for p in pieces)
    return RationalLP(tuple(p.key for p in pieces), objective, tuple(rows))


# -- standard form ----------------------------------------------------------------

def _standard_form(lp: RationalLP) -> tuple[list[list[Fraction]], list[Fraction], list[Fraction]]:
    """Rows A x' = b over x' = (x, slacks) >= 0 with one slack per inequality."""
    ineqs = [k for k, c in enumerate(lp.constraints) if c.op != "="]
    ncols = lp.n + len(ineqs)
    A, b = [], []
    for k, c in enumerate(lp.constraints):
        row = list(c.coeffs) + [Fraction(0)] * len(ineqs)
        if c.op != "=":
            s = ineqs.index(k)
            row[lp.n + s] = Fraction(-1) if c.op == ">=" else Fraction(1)
        A.append(row)
        b.append(Fraction(c.rhs))
    cost = list(lp.objective) + [Fraction(0)] * (ncols - lp.n)
    return A, b, cost


def _independent_rows(A: list[list[Fraction]], b: list[Fraction]) -> tuple[list[int], bool]:
    """Indices of a maximal independent row subset, and whether the rest is consistent."""
    m = len(A)
    ncols = len(A[0]) if A else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    basis_rows: list[int] = []
    reduced: list[tuple[int, list[Fraction]]] = []  # (pivot column, row)
    consistent = True
    for i in range(m):
        row = list(M[i])
        for col, r in reduced:
            if row[col] != 0:
                f = row[col] / r[col]
                row = [x - f * y for x, y in zip(row, r)]
        piv = next((j for j in range(ncols) if row[j] != 0), None)
        if piv is None:
            if row[ncols] != 0:
                consistent = False
            continue
        reduced.append((piv, row))
        basis_rows.append(i)
    return basis_rows, consistent


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination; None when singular."""
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.T = [list(row) + [rhs] for row, rhs in zip(A, b)]
        self.basis = list(basis)
        self.ncols = len(A[0])

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pv = T[r][c]
        T[r] = [x / pv for x in T[r]]
        for i in range(len(T)):
            if i != r and T[i][c] != 0:
                f = T[i][c]
                Ti, Tr = T[i], T[r]
                T[i] = [x - f * y for x, y in zip(Ti, Tr)]
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction], allowed: set[int]) -> dict[int, Fraction]:
        out = {}
        for j in allowed:
            if j in self.basis:
                continue
            rc = cost[j] - sum((cost[self.basis[i]] * self.T[i][j] for i in range(len(self.T))),
                               Fraction(0))
            out[j] = rc
        return out

    def run(self, cost: list[Fraction], allowed: set[int]) -> None:
        """Minimize cost over the allowed columns with Bland's rule."""
        while True:
            rcs = self.reduced_costs(cost, allowed)
            entering = next((j for j in sorted(rcs) if rcs[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.T):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise RuntimeError("LP is unbounded")
            self.pivot(best[1], entering)


def solve_exact(lp: RationalLP) -> LPSolution:
    A, b, cost = _standard_form(lp)
    keep, consistent = _independent_rows(A, b)
    if not consistent:
        return LPSolution("infeasible", variables=lp.variables)
    A = [A[i] for i in keep]
    b = [b[i] for i in keep]
    m, ncols = len(A), len(A[0])
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # phase one with one artificial column per row
    A1 = [row + [Fraction(int(i == k)) for k in range(m)] for i, row in enumerate(A)]
    tab = _Tableau(A1, b, [ncols + i for i in range(m)])
    phase1 = [Fraction(0)] * ncols + [Fraction(1)] * m
    tab.run(phase1, set(range(ncols + m)))
    if sum((tab.T[i][-1] for i in range(m) if tab.basis[i] >= ncols), Fraction(0)) != 0:
        return LPSolution("infeasible", variables=lp.variables)
    for i in range(m):
        if tab.basis[i] >= ncols:
            c = next((j for j in range(ncols) if tab.T[i][j] != 0), None)
            if c is None:  # cannot happen once dependent rows are gone
                raise RuntimeError("degenerate artificial row")
            tab.pivot(i, c)
    tab.run(cost, set(range(ncols)))
    xfull = [Fraction(0)] * ncols
    for i, j in enumerate(tab.basis):
        xfull[j] = tab.T[i][-1]
    x = tuple(xfull[:lp.n])
    value = lp.value(x)
    # dual: B^T y = c_B
    Bt = [[A[i][tab.basis[k]] for i in range(m)] for k in range(m)]
    y = _solve_square(Bt, [cost[j] for j in tab.basis])
    if y is None:
        raise RuntimeError("singular optimal basis")
    dual = [Fraction(0)] * len(lp.constraints)
    for i, row_index in enumerate(keep):
        dual[row_index] = y[i]
    # undo sign flips
    _, b_orig, _ = _standard_form(lp)
    for row_index in keep:
        if b_orig[row_index] < 0:
            dual[row_index] = -dual[row_index]
    sol = LPSolution("optimal", value, x, tuple(dual), lp.variables)
    problems = verify_certificate(lp, sol)
    if problems:
        raise RuntimeError("dual certificate failed: " + "; ".join(problems))
    return sol


def verify_certificate(lp: RationalLP, sol: LPSolution) -> list[str]:
    """Independent optimality check: primal feasible, dual feasible, equal objectives."""
    problems = lp.violations(sol.vertex)
    A, b, cost = _standard_form(lp)
    y = sol.dual
    ncols = len(cost)
    for j in range(ncols):
        aty = sum((A[i][j] * y[i] for i in range(len(A))), Fraction(0))
        if aty > cost[j]:
            problems.append(f"dual infeasible in column {j}")
    by = sum((bi * yi for bi, yi in zip(b, y)), Fraction(0))
    if by != sol.value or lp.value(sol.vertex) != sol.value:
        problems.append(f"objective mismatch: primal {sol.value}, dual {by}")
    return problems


def brute_force_vertices(lp: RationalLP) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """All basic feasible solutions by exhaustive basis enumeration."""
    if lp.n > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_VARS} variables, got {lp.n}")
    A, b, cost = _standard_form(lp)
    keep, consistent = _independent_rows(A, b)
    if not consistent:
        return []
    A = [A[i] for i in keep]
    b = [b[i] for i in keep]
    m, ncols = len(A), len(A[0])
    found: dict[tuple[Fraction, ...], Fraction] = {}
    for cols in itertools.combinations(range(ncols), m):
        M = [[A[i][j] for j in cols] for i in range(m)]
        sol = _solve_square(M, b)
        if sol is None or any(v < 0 for v in sol):
            continue
        x = [Fraction(0)] * ncols
        for j, v in zip(cols, sol):
            x[j] = v
        vert = tuple(x[:lp.n])
        found.setdefault(vert, lp.value(vert))
    return sorted(found.items(), key=lambda kv: (kv[1], kv[0]))


# -- text format ----------------------------------------------------------------

def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _expr(coeffs: Sequence[Fraction], names: Sequence[str]) -> str:
    terms = []
    for c, v in zip(coeffs, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = _fmt(abs(c))
        body = v if mag == "1" else f"{mag} {v}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, t in terms[1:]:
        out += f" {s} {t}"
    return out


def export_lp_text(lp: RationalLP) -> str:
    """Render as ``vars: ...;`` ``min: ...;`` then ``name: expr op rhs;`` lines."""
    lines = ["vars: " + " ".join(lp.variables) + ";",
             "min: " + _expr(lp.objective, lp.variables) + ";"]
    for c in lp.constraints:
        lines.append(f"{c.name}: {_expr(c.coeffs, lp.variables)} {c.op} {_fmt(c.rhs)};")
    return "\n".join(lines) + "\n"


class LPSyntaxError(ValueError):
    pass


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)?\s*")


def _parse_expr(text: str, index: dict[str, int], n: int, lineno: int) -> tuple[Fraction, ...]:
    coeffs = [Fraction(0)] * n
    text = text.strip()
    if text == "0":
        return tuple(coeffs)
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, num, var = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or var is None or (sign is None and not first):
            raise LPSyntaxError(f"line {lineno}, column {pos + 1}: bad term in {text!r}")
        if var not in index:
            raise LPSyntaxError(f"line {lineno}: unknown variable {var!r}")
        c = Fraction(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        coeffs[index[var]] += c
        pos = m.end()
        first = False
    return tuple(coeffs)


def parse_lp_text(text: str) -> RationalLP:
    statements = [(i + 1, line.strip()) for i, line in enumerate(text.splitlines())
                  if line.strip() and not line.strip().startswith("#")]
    if len(statements) < 2:
        raise LPSyntaxError("expected vars and min lines")
    variables: tuple[str, ...] = ()
    objective = None
    constraints = []
    index: dict[str, int] = {}
    for lineno, line in statements:
        if not line.endswith(";"):
            raise LPSyntaxError(f"line {lineno}: missing ';'")
        head, _, body = line[:-1].partition(":")
        head, body = head.strip(), body.strip()
        if head == "vars":
            variables = tuple(body.split())
            index = {v: k for k, v in enumerate(variables)}
        elif head == "min":
            objective = _parse_expr(body, index, len(variables), lineno)
        else:
            m = re.fullmatch(r"(.*?)\s*(>=|<=|=)\s*(-?\d+(?:/\d+)?)", body)
            if not m:
                raise LPSyntaxError(f"line {lineno}: cannot parse constraint {body!r}")
            coeffs = _parse_expr(m.group(1), index, len(variables), lineno)
            constraints.append(Constraint(head, coeffs, m.group(2), Fraction(m.group(3))))
    if objective is None:
        raise LPSyntaxError("no objective line")
    return RationalLP(variables, objective, tuple(constraints))


def solution_json(sol: LPSolution) -> str:
    return json.dumps(sol.to_json(), indent=2, sort_keys=True) + "\n"


def restricted(lp: RationalLP, zero: Sequence[str]) -> RationalLP:
    """The same LP with the named variables forced to zero."""
    extra = []
    for name in zero:
        k = lp.variables.index(name)
        coeffs = tuple(Fraction(int(j == k)) for j in range(lp.n))
        extra.append(Constraint(f"fix_{name}", coeffs, "=", Fraction(0)))
    return RationalLP(lp.variables, lp.objective, lp.constraints + tuple(extra))
