"""Exact rational linear programming and the Delsarte bound for EKR sets.

The solver is a dense two-phase tableau simplex over :class:`Fraction` with
Bland's rule, so it terminates on degenerate problems and its pivot sequence
is fully deterministic.  Problem sizes here are tiny (d+1 variables), so speed
is irrelevant next to exactness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .qcore import PolarParams
from .spectra import multiplicities, q_matrix

LE, EQ, GE = "<=", "==", ">="
OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = "optimal", "infeasible", "unbounded", "iteration_limit"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass
class Constraint:
    coeffs: list[Fraction]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {self.rel!r}")
        self.coeffs = [_frac(c) for c in self.coeffs]
        self.rhs = _frac(self.rhs)

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        """Non-negative iff satisfied (zero for tight or equality rows)."""
        lhs = sum(c * v for c, v in zip(self.coeffs, x))
        if self.rel == LE:
            return self.rhs - lhs
        if self.rel == GE:
            return lhs - self.rhs
        return -abs(lhs - self.rhs)


@dataclass
class LPProblem:
    """maximize c.x subject to the constraints and x_i >= lower[i] (None = free)."""

    objective: list[Fraction]
    constraints: list[Constraint] = field(default_factory=list)
    lower: list[Fraction | None] | None = None
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        self.objective = [_frac(c) for c in self.objective]
        n = len(self.objective)
        if self.lower is None:
            self.lower = [Fraction(0)] * n
        if len(self.lower) != n:
            raise ValueError("lower bounds do not match the number of variables")
        self.lower = [None if b is None else _frac(b) for b in self.lower]
        for con in self.constraints:
            if len(con.coeffs) != n:
                raise ValueError("constraint width does not match the number of variables")
        self.offset = _frac(self.offset)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add(self, coeffs, rel: str, rhs) -> "LPProblem":
        con = Constraint(list(coeffs), rel, rhs)
        if len(con.coeffs) != self.num_vars:
            raise ValueError("constraint width does not match the number of variables")
        self.constraints.append(con)
        return self

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset + sum(c * v for c, v in zip(self.objective, x))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if any(b is not None and v < b for v, b in zip(x, self.lower)):
            return False
        return all(con.slack(x) >= 0 for con in self.constraints)

    def dump(self) -> str:
        """Plain-text listing of the instance."""
        def row(cs):
            return " ".join(f"{str(c):>10}" for c in cs)
        lines = [f"max {row(self.objective)}  + {self.offset}"]
        for con in self.constraints:
            lines.append(f"    {row(con.coeffs)} {con.rel} {con.rhs}")
        lines.append("lower " + " ".join("free" if b is None else str(b) for b in self.lower))
        return "\n".join(lines)


@dataclass
class LPResult:
    status: str
    value: Fraction | None
    x: list[Fraction] | None
    iterations: int

    @property
    def floor(self) -> int | None:
        return None if self.value is None else math.floor(self.value)


def _clear_denominators(coeffs: list[Fraction], rhs: Fraction) -> tuple[list[Fraction], Fraction]:
    den = 1
    for v in (*coeffs, rhs):
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [c * den for c in coeffs], rhs * den


class _Tableau:
    """Rows are [a_1 .. a_N | b]; ``basis[i]`` is the basic column of row i."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], max_iter: int):
        self.rows = rows
        self.basis = basis
        self.iterations = 0
        self.max_iter = max_iter

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        pv = row[c]
        if pv != 1:
            self.rows[r] = row = [v / pv for v in row]
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = c
        self.iterations += 1

    def reduced_costs(self, cost: list[Fraction], allowed: int) -> list[Fraction]:
        """c_j - c_B B^-1 A_j for columns < allowed (maximization sign convention)."""
        out = list(cost[:allowed])
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(allowed):
                    if row[j]:
                        out[j] -= cb * row[j]
        return out

    def optimize(self, cost: list[Fraction], allowed: int) -> str:
        """Maximize cost.x over the current basis using Bland's rule on columns < allowed."""
        while True:
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT
            rc = self.reduced_costs(cost, allowed)
            entering = next((j for j in range(allowed) if rc[j] > 0), None)
            if entering is None:
                return OPTIMAL
            best, leave = None, None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    # Bland: minimum ratio, ties broken by smallest basic index
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, entering)


def simplex_solve(prob: LPProblem, max_iter: int = 100_000) -> LPResult:
    n = prob.num_vars
    # substitute x = lower + y (y >= 0), free x = y+ - y-
    cols: list[list[tuple[int, int]]] = []  # original var -> [(column, sign)]
    ncol = 0
    for b in prob.lower:
        if b is None:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            ncol += 2
        else:
            cols.append([(ncol, 1)])
            ncol += 1
    shift = [b if b is not None else Fraction(0) for b in prob.lower]

    def expand(coeffs: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * ncol
        for i, c in enumerate(coeffs):
            for col, sign in cols[i]:
                out[col] += sign * c
        return out

    m = len(prob.constraints)
    n_slack = sum(1 for con in prob.constraints if con.rel != EQ)
    width = ncol + n_slack + m  # structural | slack | artificial
    rows, basis = [], []
    slack_at = ncol
    for k, con in enumerate(prob.constraints):
        rhs = con.rhs - sum(c * s for c, s in zip(con.coeffs, shift))
        coeffs, rhs = _clear_denominators(expand(con.coeffs), rhs)
        row = coeffs + [Fraction(0)] * (n_slack + m) + [rhs]
        if con.rel != EQ:
            row[slack_at] = Fraction(1 if con.rel == LE else -1)
            slack_col, slack_at = slack_at, slack_at + 1
        else:
            slack_col = None
        if row[-1] < 0:
            row = [-v for v in row]
        if slack_col is not None and row[slack_col] == 1:
            basis.append(slack_col)
        else:
            row[ncol + n_slack + k] = Fraction(1)
            basis.append(ncol + n_slack + k)
        rows.append(row)

    tab = _Tableau(rows, basis, max_iter)
    art_start = ncol + n_slack
    if any(b >= art_start for b in basis):
        phase1 = [Fraction(0)] * art_start + [Fraction(-1)] * m
        status = tab.optimize(phase1, width)
        if status == ITERATION_LIMIT:
            return LPResult(status, None, None, tab.iterations)
        infeas = sum(tab.rows[i][-1] for i, b in enumerate(tab.basis) if b >= art_start)
        if infeas > 0:
            return LPResult(INFEASIBLE, None, None, tab.iterations)
        # drive zero-level artificials out of the basis, or drop redundant rows
        for i in reversed(range(len(tab.rows))):
            if tab.basis[i] >= art_start:
                j = next((j for j in range(art_start) if tab.rows[i][j] != 0), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                else:
                    tab.pivot(i, j)
    cost = expand(prob.objective) + [Fraction(0)] * (n_slack + m)
    status = tab.optimize(cost, art_start)
    if status != OPTIMAL:
        return LPResult(status, None, None, tab.iterations)
    y = [Fraction(0)] * width
    for i, b in enumerate(tab.basis):
        y[b] = tab.rows[i][-1]
    x = [shift[i] + sum(sign * y[col] for col, sign in cols[i]) for i in range(n)]
    return LPResult(OPTIMAL, prob.value_at(x), x, tab.iterations)


def dual_problem(prob: LPProblem) -> LPProblem:
    """Dual of ``max c.x, A x <= b, x >= 0`` as a maximization of -b.y."""
    if any(b != 0 for b in prob.lower) or any(con.rel != LE for con in prob.constraints):
        raise ValueError("dual_problem expects the canonical form max c.x, Ax <= b, x >= 0")
    m, n = len(prob.constraints), prob.num_vars
    dual = LPProblem([-con.rhs for con in prob.constraints], offset=-prob.offset)
    for j in range(n):
        dual.add([prob.constraints[i].coeffs[j] for i in range(m)], GE, prob.objective[j])
    return dual


# -- Delsarte bound -------------------------------------------------------------

def delsarte_problem(p: PolarParams, t: int) -> LPProblem:
    """Inner-distribution LP for sets whose pairwise codimensions lie in {0..t}.

    Variables are x_1..x_t (x_0 = 1 is folded into the offset and the
    right-hand sides).
    """
    if not 0 <= t <= p.d:
        raise ValueError(f"t={t} outside 0..{p.d}")
    Q = q_matrix(p)
    m = multiplicities(p)
    prob = LPProblem([Fraction(1)] * t, offset=Fraction(1))
    for j in range(p.d + 1):
        prob.add([Q[i][j] for i in range(1, t + 1)], GE, -m[j])
    return prob


def delsarte_lp(p: PolarParams, t: int, max_iter: int = 100_000) -> LPResult:
    if t == 0:
        return LPResult(OPTIMAL, Fraction(1), [Fraction(1)] + [Fraction(0)] * p.d, 0)
    res = simplex_solve(delsarte_problem(p, t), max_iter=max_iter)
    if res.status == OPTIMAL:
        res.x = [Fraction(1)] + res.x + [Fraction(0)] * (p.d - t)
    return res


def inner_distribution_feasible(p: PolarParams, x: Sequence[Fraction]) -> bool:
    """Whether a full inner distribution (x_0 = 1, ...) satisfies every dual constraint."""
    Q = q_matrix(p)
    k = p.d + 1
    return x[0] == 1 and all(v >= 0 for v in x) and all(
        sum(x[i] * Q[i][j] for i in range(k)) >= 0 for j in range(k))
