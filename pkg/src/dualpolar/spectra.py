"""Eigenvalues of the dual polar association scheme.

``P[r][s]`` is the eigenvalue of the codimension-s relation on the r-th common
eigenspace.  ``lam(p, r, a)`` is the eigenvalue of the sum of the relations of
codimension d-a, ..., d on that eigenspace; it is computed from a closed form
and, independently, as a sum of P-entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .qcore import PolarParams, binom2, gauss, num_generators, qpow_half


def _check_index(p: PolarParams, *idx: int) -> None:
    for i in idx:
        if not 0 <= i <= p.d:
            raise ValueError(f"index {i} outside 0..{p.d}")


@lru_cache(maxsize=None)
def eigenvalue_P(p: PolarParams, r: int, s: int) -> int:
    _check_index(p, r, s)
    d, q, e2 = p.d, p.q, p.twice_eps
    total = 0
    for t in range(max(r - s, 0), min(d - s, r) + 1):
        u = s - r + t
        term = gauss(d - r, d - s - t, q) * gauss(r, t, q)
        if term:
            term *= qpow_half(q, 2 * binom2(r - t) + 2 * binom2(u) + u * e2)
            total += -term if (r - t) % 2 else term
    return total


def p_matrix(p: PolarParams) -> list[list[int]]:
    return [[eigenvalue_P(p, r, s) for s in range(p.d + 1)] for r in range(p.d + 1)]


def A_term(p: PolarParams, r: int, s: int, a: int) -> int:
    d, q, e2 = p.d, p.q, p.twice_eps
    g1 = gauss(d - r, s, q)
    g2 = gauss(r - 1, a - s, q)
    if g1 == 0 or g2 == 0:
        return 0
    return g1 * g2 * qpow_half(q, 2 * binom2(d - r - s) + (d - r - s) * e2) * q ** binom2(r - a + s)


def _check_a(p: PolarParams, a: int) -> None:
    if not 0 <= a < p.d:
        raise ValueError(f"a={a} outside 0..{p.d - 1}")


@lru_cache(maxsize=None)
def lam(p: PolarParams, r: int, a: int) -> int:
    """Eigenvalue on eigenspace r of the relations with codimension > d-a-1, closed form."""
    _check_index(p, r)
    _check_a(p, a)
    d, q, e2 = p.d, p.q, p.twice_eps
    if r == 0:
        return sum(gauss(d, s, q) * qpow_half(q, 2 * binom2(d - s) + (d - s) * e2)
                   for s in range(a + 1))
    total = 0
    for s in range(max(a - r + 1, 0), min(a, d - r) + 1):
        term = A_term(p, r, s, a)
        total += -term if s % 2 else term
    return -total if (r + a) % 2 else total


def lam_from_P(p: PolarParams, r: int, a: int) -> int:
    _check_a(p, a)
    return sum(eigenvalue_P(p, r, p.d - s) for s in range(a + 1))


def lam_special_rows(p: PolarParams, r: int, a: int) -> int:
    """Simplified closed forms for r = 1, d-1 and d."""
    _check_a(p, a)
    d, q, e2 = p.d, p.q, p.twice_eps
    if r == 1:
        return -gauss(d - 1, a, q) * qpow_half(q, 2 * binom2(d - a - 1) + (d - a - 1) * e2)
    if r == d:
        return (-1) ** (d - a) * gauss(d - 1, a, q) * q ** binom2(d - a)
    if r == d - 1:
        first = gauss(d - 2, a, q)
        first = first * qpow_half(q, 2 * binom2(d - a - 1) + e2) if first else 0
        second = gauss(d - 2, a - 1, q) * q ** binom2(d - a)
        return (-1) ** (d - 1 + a) * first + (-1) ** (d + a) * second
    raise ValueError("closed forms exist only for r in {1, d-1, d}")


@dataclass
class EigTable:
    a: int
    values: list[int]
    argmin: list[int]
    argmax_abs: list[int]

    @property
    def lam_min(self) -> int:
        return self.values[self.argmin[0]]

    @property
    def max_abs(self) -> int:
        return abs(self.values[self.argmax_abs[0]])


def eig_table(p: PolarParams, a: int) -> EigTable:
    values = [lam(p, r, a) for r in range(p.d + 1)]
    rest = values[1:]
    lo = min(rest)
    hi = max(abs(v) for v in rest)
    argmin = [r for r in range(1, p.d + 1) if values[r] == lo]
    argmax = [r for r in range(1, p.d + 1) if abs(values[r]) == hi]
    return EigTable(a, values, argmin, argmax)


def extremal_eigs(p: PolarParams, a: int) -> tuple[tuple[int, list[int]], tuple[int, list[int]]]:
    """(min over r>=1 with its argmin set, max |.| over r>=1 with its argmax set)."""
    _check_a(p, a)
    tab = eig_table(p, a)
    return (tab.lam_min, tab.argmin), (tab.max_abs, tab.argmax_abs)


def multiplicities(p: PolarParams) -> list[int]:
    P = p_matrix(p)
    n = num_generators(p)
    valency = P[0]
    out = []
    for j in range(p.d + 1):
        norm = sum(Fraction(P[j][i] ** 2, valency[i]) for i in range(p.d + 1))
        m = Fraction(n) / norm
        if m.denominator != 1 or m <= 0:
            raise ArithmeticError(f"multiplicity m_{j} = {m} is not a positive integer")
        out.append(int(m))
    return out


def q_matrix(p: PolarParams) -> list[list[Fraction]]:
    P = p_matrix(p)
    m = multiplicities(p)
    valency = P[0]
    k = p.d + 1
    return [[Fraction(m[j] * P[j][i], valency[i]) for j in range(k)] for i in range(k)]


@dataclass
class SchemeSpectrum:
    params: PolarParams
    P: list[list[int]]
    valencies: list[int]
    multiplicities: list[int]
    Q: list[list[Fraction]]

    @classmethod
    def of(cls, p: PolarParams) -> "SchemeSpectrum":
        P = p_matrix(p)
        return cls(p, P, list(P[0]), multiplicities(p), q_matrix(p))

    def check(self) -> list[str]:
        """Return the list of violated scheme identities (empty when consistent)."""
        errs = []
        n = num_generators(self.params)
        if sum(self.valencies) != n:
            errs.append("valencies do not sum to n")
        if sum(self.multiplicities) != n:
            errs.append("multiplicities do not sum to n")
        k = len(self.P)
        for i in range(k):
            for j in range(k):
                v = sum(self.P[i][l] * self.Q[l][j] for l in range(k))
                if v != (n if i == j else 0):
                    errs.append(f"(PQ)[{i}][{j}] = {v}")
        return errs

    def to_json(self) -> dict:
        p = self.params
        return {
            "schema_version": 1,
            "params": {"family": p.family.value, "q": p.q, "d": p.d},
            "P": [[str(x) for x in row] for row in self.P],
            "multiplicities": [str(m) for m in self.multiplicities],
            "lambda_tables": {
                str(a): [str(lam(p, r, a)) for r in range(p.d + 1)] for a in range(p.d)
            },
        }


# -- exact checks against a concrete graph --------------------------------------

_PRIMES = (1048573, 1048571, 1048559, 1048549, 1048517, 1048507, 1048447, 1048433)


def _annihilation_primes(n: int, values: list[int]) -> list[int]:
    # entries of prod (M - lam I) are bounded by prod (max row abs sum of each factor)
    bound = 1
    for v in values:
        bound *= n + abs(v)
    need, out = 2 * bound + 1, []
    for pr in _PRIMES:
        if pr * pr * n >= 2 ** 53:
            raise ValueError("graph too large for the float64 modular product")
        out.append(pr)
        need = -(-need // pr)
        if need <= 1:
            return out
    raise ValueError("not enough primes to certify the product bound")


def matrix_polynomial_is_zero(M: np.ndarray, roots: list[int]) -> tuple[bool, tuple[int, int] | None]:
    """Exactly decide whether prod_{l in roots} (M - l I) == 0 for an integer matrix M.

    The product is evaluated modulo several primes with float64 BLAS (exact
    because every dot product stays below 2**53); the primes are chosen so that
    their product exceeds twice the largest possible absolute entry.
    """
    n = M.shape[0]
    if not roots:
        return bool(np.all(M == 0)), None
    primes = _annihilation_primes(n, roots)
    for pr in primes:
        base = np.mod(M.astype(np.int64), pr).astype(np.float64)
        acc = None
        for lam_ in roots:
            factor = base.copy()
            factor[np.diag_indices(n)] = np.mod(factor[np.diag_indices(n)] - lam_, pr)
            acc = factor if acc is None else np.mod(acc @ factor, pr)
        nz = np.argwhere(acc != 0)
        if len(nz):
            i, j = nz[0]
            return False, (int(i), int(j))
    return True, None


@dataclass
class SpectrumReport:
    params: PolarParams
    t: int
    values: list[int]
    distinct: list[int]
    annihilated: bool
    witness: tuple[int, int] | None
    row_sum_ok: bool
    trace_ok: bool
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.annihilated and self.row_sum_ok and self.trace_ok


def verify_spectrum(g, t: int) -> SpectrumReport:
    """Check the predicted spectrum of the sum of relations with codimension > t on a graph."""
    p, d = g.params, g.d
    if not 0 <= t <= d:
        raise ValueError(f"t={t} outside 0..{d}")
    M = (g.codim > t).astype(np.int64)
    if t == d:
        values = [0] * (d + 1)
    else:
        values = [lam(p, r, d - t - 1) for r in range(d + 1)]
    distinct = sorted(set(values))
    ok, witness = matrix_polynomial_is_zero(M, distinct)
    row_sum_ok = bool(np.all(M.sum(axis=1) == values[0]))
    mult = multiplicities(p)
    # tr M = 0 and tr M^2 = n*k pin down the multiplicity-weighted spectrum
    tr1 = sum(m * v for m, v in zip(mult, values))
    tr2 = sum(m * v * v for m, v in zip(mult, values))
    trace_ok = tr1 == 0 and tr2 == int(M.sum())
    return SpectrumReport(p, t, values, distinct, ok, witness, row_sum_ok, trace_ok)


def commuting_relations(g) -> bool:
    mats = [g.adjacency(s).astype(np.float64) for s in range(g.d + 1)]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not np.array_equal(mats[i] @ mats[j], mats[j] @ mats[i]):
                return False
    return True
