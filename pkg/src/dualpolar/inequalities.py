"""Checkable predicates behind the asymptotic estimates.

Each family of inequalities is swept over a grid; every instance produces a
:class:`Check`.  Rational instances are compared exactly, instances involving
logarithms or ``alpha`` are compared in log space with ``LOG_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .bounds import (
    BoundContext, b_even, b_odd, gamma, generator_ratio_bound, y_lower,
)
from .qcore import Family, PolarParams, binom2, gauss, num_generators, psi_even, psi_odd, qpow_half

LOG_TOL = 1e-9
FD_STEP = 1e-5
FD_TOL = 1e-4


@dataclass(frozen=True)
class Check:
    name: str
    params: dict
    lhs: object
    rhs: object
    ok: bool


@dataclass
class SuiteReport:
    checks_by_name: dict[str, int] = field(default_factory=dict)
    violations: list[Check] = field(default_factory=list)

    def add(self, c: Check) -> None:
        self.checks_by_name[c.name] = self.checks_by_name.get(c.name, 0) + 1
        if not c.ok:
            self.violations.append(c)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def total(self) -> int:
        return sum(self.checks_by_name.values())


def _le_log(lhs_log: float, rhs_log: float) -> bool:
    return lhs_log <= rhs_log + LOG_TOL


def _log(x) -> float:
    """log of a positive int/Fraction/float; -inf for zero."""
    if x == 0:
        return -math.inf
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def _q_power(q: int, exponent: Fraction) -> Fraction:
    """q**exponent for exponents with denominator 1, 2 or 4 (the latter only for square q)."""
    exponent = Fraction(exponent)
    den = exponent.denominator
    if den == 1:
        return Fraction(q) ** exponent.numerator
    if den == 2:
        return Fraction(qpow_half(q, exponent.numerator))
    raise ValueError(f"cannot raise q={q} to {exponent} exactly")


# -- real-variable estimates -------------------------------------------------------

def log_sandwich(xs: Iterable[float]) -> Iterator[Check]:
    for x in xs:
        lo, mid, hi = 2 * x / (2 + x), math.log1p(x), x / 2 * (2 + x) / (1 + x)
        ok = lo <= mid + LOG_TOL and mid <= hi + LOG_TOL
        yield Check("log_sandwich", {"x": x}, (lo, mid), (mid, hi), ok)


def log_ratio(x: float, q: float) -> float:
    return math.log1p(q ** -x) / math.log1p(q ** (-x - 1))


def log_ratio_derivative_bound(x: float, q: float) -> float:
    qx = q ** x
    num = (qx * (2 * q - 2) - 1) * math.log(q)
    den = 2 * q * qx * (2 * qx + 1) * (qx + 1) * (q * qx + 1) * math.log1p(q ** (-x - 1)) ** 2
    return num / den


def log_ratio_derivative(xs: Iterable[float], qs: Iterable[float]) -> Iterator[Check]:
    qs = list(qs)
    for x in xs:
        for q in qs:
            h = FD_STEP
            fd = (log_ratio(x + h, q) - log_ratio(x - h, q)) / (2 * h)
            bound = log_ratio_derivative_bound(x, q)
            ok = fd >= bound - FD_TOL and (x <= 0 or fd > -FD_TOL)
            yield Check("log_ratio_derivative", {"x": x, "q": q}, fd, bound, ok)


def ratio_bound_monotone(xs: list[float], qs: list[float]) -> Iterator[Check]:
    """g(x, q) decreases in x for fixed q, and g(0, q) decreases in q."""
    for q in qs:
        vals = [generator_ratio_bound(q, x) for x in xs]
        for (x0, v0), (x1, v1) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
            yield Check("ratio_bound_monotone_x", {"q": q, "x0": x0, "x1": x1}, v1, v0,
                        _le_log(math.log(v1), math.log(v0)))
    g0 = [generator_ratio_bound(q, 0.0) for q in qs]
    for (q0, v0), (q1, v1) in zip(zip(qs, g0), zip(qs[1:], g0[1:])):
        yield Check("ratio_bound_monotone_q", {"q0": q0, "q1": q1}, v1, v0,
                    _le_log(math.log(v1), math.log(v0)))


# -- generator counts and Gaussian coefficients --------------------------------------

def generator_count_bounds(params: Iterable[PolarParams]) -> Iterator[Check]:
    for p in params:
        n = num_generators(p)
        floor_ = qpow_half(p.q, p.d * p.twice_eps + 2 * binom2(p.d))
        yield Check("generator_count_lower", _pd(p), floor_, n, floor_ <= n)
        ratio_log = _log(n) - _log(floor_)
        cap = math.log(generator_ratio_bound(p.q, float(p.eps)))
        yield Check("generator_count_upper", _pd(p), ratio_log, cap, _le_log(ratio_log, cap))


def generator_product_real_eps(qs: Iterable[int], es: Iterable[float], d_max: int) -> Iterator[Check]:
    """The product bound also for non-family (real) values of the type parameter."""
    es = list(es)
    for q in qs:
        for e in es:
            cap = math.log(generator_ratio_bound(q, e))
            acc = 0.0
            for d in range(1, d_max + 1):
                acc += math.log1p(q ** (-e - d + 1))
                yield Check("generator_product_real_eps", {"q": q, "e": e, "d": d}, acc, cap,
                            _le_log(acc, cap))


def gauss_upper(qs: Iterable[int], n_max: int) -> Iterator[Check]:
    for q in qs:
        for n in range(0, n_max + 1):
            for k in range(0, n + 1):
                g = gauss(n, k, q)
                base = Fraction(q) ** (k * (n - k))
                if q >= 3:
                    yield Check("gauss_upper_q3", {"q": q, "n": n, "k": k}, g, 2 * base, g <= 2 * base)
                if q >= 4:
                    rhs = (1 + Fraction(2, q)) * base
                    yield Check("gauss_upper_q4", {"q": q, "n": n, "k": k}, g, rhs, g <= rhs)
                if k == 1:
                    rhs = Fraction(q, q - 1) * Fraction(q) ** (n - 1)
                    yield Check("gauss_upper_k1", {"q": q, "n": n}, g, rhs, g <= rhs)
                if k >= 3 and q >= 3:
                    # the strengthened product inequality used for the induction
                    a = 3 if q == 3 else 2
                    prod = Fraction(1)
                    for i in range(1, k + 1):
                        prod *= Fraction(q ** i, q ** i - 1)
                    rhs = 1 + a * Fraction(q ** (k - 1) - 2, q ** k - 2)
                    yield Check("gauss_product_strengthened", {"q": q, "k": k, "n": n}, prod, rhs,
                                prod <= rhs)


def gauss_lower(qs: Iterable[int], n_max: int) -> Iterator[Check]:
    for q in qs:
        for n in range(2, n_max + 1):
            for k in range(1, n):
                lhs = (1 + Fraction(1, q)) * Fraction(q) ** (k * (n - k))
                g = gauss(n, k, q)
                yield Check("gauss_lower", {"q": q, "n": n, "k": k}, lhs, g, lhs <= g)


# -- the subspace-count and b-constant estimates --------------------------------------

def psi_bounds(qs: Iterable[int], d_max: int) -> Iterator[Check]:
    for q in qs:
        g2 = gamma(q) ** 2 / (1 - Fraction(1, q * q))
        for d in range(1, d_max + 1):
            for t in range(0, d + 1):
                if 5 * t > 2 * d + 1:
                    continue
                tf = Fraction(t)
                if t % 2 == 0:
                    lhs = psi_even(d, t, q)
                    e = Fraction(3, 4) * tf * tf + tf / 2 * (d - 2 * tf) - (d - Fraction(5, 2) * tf + 2)
                    name = "psi_even_upper"
                else:
                    lhs = psi_odd(d, t, q)
                    # prefactor exponent of the closed form, (t-1)/2 * 3(t-1)/2
                    e = ((tf / 2 - Fraction(1, 2)) * (Fraction(3, 2) * tf - Fraction(3, 2))
                         + (d - 2 * tf + 1) * (tf / 2 - Fraction(1, 2))
                         - (d - Fraction(5, 2) * tf + Fraction(7, 2)))
                    name = "psi_odd_upper"
                rhs = _q_power(q, e) * g2
                yield Check(name, {"q": q, "d": d, "t": t}, lhs, rhs, lhs <= rhs)


def _pd(p: PolarParams) -> dict:
    return {"family": p.family.value, "q": p.q, "d": p.d}


def b_constant_bounds(params: Iterable[PolarParams]) -> Iterator[Check]:
    """Upper estimates of the b-constants (q >= 3, t >= 2, 5t <= 2d), compared in log space."""
    for p in params:
        q, d = p.q, p.d
        if q < 3:
            continue
        eps = float(p.eps)
        ctx = BoundContext(q, p.twice_eps)
        lg = math.log(float(ctx.gamma))
        lr = math.log(ctx.ratio_bound)
        lq = math.log(q)
        l_geo = -math.log1p(-1 / q ** 2)
        for t in range(2, d + 1):
            if 5 * t > 2 * d:
                continue
            info = {**_pd(p), "t": t}
            if t % 2 == 0:
                b = b_even(p, t)
                base = (t / 2 - 1) * (d - 2 * t + 1) + t * (t - 2)
                if eps >= 1:
                    e1 = base + binom2(t) + t * eps
                    yield _log_check("b1_even_upper_eps_ge1", info, b.b1, e1 * lq + 2 * lg + lr)
                if eps <= 1:
                    e1 = base + binom2(t + 1)
                    yield _log_check("b1_even_upper_eps_le1", info, b.b1, e1 * lq + 2 * lg + lr)
                e2 = eps * t / 2 + binom2(t // 2) + (2 * t * (d + 5) - t * t - 4 * d - 8) / 4
                yield _log_check("b2_even_upper", info, b.b2, e2 * lq + 2 * lg + l_geo)
            else:
                b = b_odd(p, t)
                e1 = (t - 3) / 2 * (d - 2 * t + 2) + (t - 3) * t + binom2(t) + t * eps
                yield _log_check("b1_odd_upper", info, b.b1, e1 * lq + 2 * lg + lr)
                h = (t + 1) // 2
                e2 = eps * h + binom2(h) + (2 * t * (d + 5) - t * t - 6 * d - 13) / 4
                yield _log_check("b2_odd_upper", info, b.b2, e2 * lq + 2 * lg + l_geo + lr)
                e3 = eps * (t - 1) / 2 + binom2((t - 1) // 2) + (2 * t * (d + 1) - t * t - 2 * d - 1) / 4
                yield _log_check("b3_odd_upper", info, b.b3, e3 * lq + lg)


def _log_check(name: str, info: dict, value: int, rhs_log: float) -> Check:
    lhs_log = _log(value)
    return Check(name, info, lhs_log, rhs_log, _le_log(lhs_log, rhs_log))


def example_size_lower(params: Iterable[PolarParams]) -> Iterator[Check]:
    """y >= (1 + 1/q) q^(...) (times (1 + q^-eps) for odd t), exactly."""
    for p in params:
        q, d = p.q, p.d
        e = p.eps
        for t in range(2, d - 1):
            y = y_lower(p, t)
            if t % 2 == 0:
                h = t // 2
                ex = e * h + binom2(h) + Fraction(h * (d - h))
                rhs = _q_power(q, ex) * (1 + Fraction(1, q))
            else:
                h = (t + 1) // 2
                ex = e * h + binom2(h) + Fraction((t - 1) // 2 * (d - h))
                rhs = _q_power(q, ex) * (1 + Fraction(1, q)) * (1 + 1 / _q_power(q, e))
            yield Check("example_size_lower", {**_pd(p), "t": t}, rhs, y, rhs <= y)


def final_comparison(qs: Iterable[int], twice_eps_values: Iterable[int], z_max: int) -> Iterator[Check]:
    """The two numeric inequalities that turn the degree gaps into a strict comparison."""
    twice_eps_values = list(twice_eps_values)
    for q in qs:
        g = float(gamma(q))
        geo = 1 / (1 - q ** -2)
        for e2 in twice_eps_values:
            eps = e2 / 2
            r = generator_ratio_bound(q, eps)
            for z in range(3, z_max + 1):
                lhs = q ** z * (1 + 1 / q)
                rhs = g * g * (r + geo)
                yield Check("final_even", {"q": q, "eps": eps, "z": z}, lhs, rhs,
                            _le_log(math.log(rhs), math.log(lhs)))
                if z >= 4:
                    lhs = q ** z * (1 + 1 / q) * (1 + q ** -eps)
                    rhs = g * q ** (z - eps) + g * g * r * (2 + geo)
                    yield Check("final_odd", {"q": q, "eps": eps, "z": z}, lhs, rhs,
                                _le_log(math.log(rhs), math.log(lhs)))


# -- driver ---------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteGrid:
    qs_small: tuple[int, ...] = (2, 3, 4, 5, 7, 8, 9)
    qs_large: tuple[int, ...] = (3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27)
    d_max: int = 16
    n_max: int = 14
    z_max: int = 12
    xs: tuple[float, ...] = tuple([0.0, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e4])


def family_grid(qs: Iterable[int], d_max: int) -> list[PolarParams]:
    out = []
    for q in qs:
        for fam in Family:
            if fam.hermitian and math.isqrt(q) ** 2 != q:
                continue
            out.extend(PolarParams(fam, q, d) for d in range(1, d_max + 1))
    return out


def run_suite(grid: SuiteGrid = SuiteGrid()) -> SuiteReport:
    rep = SuiteReport()
    fams = family_grid(grid.qs_small, grid.d_max)
    xs_pos = [x / 4 for x in range(0, 41)]
    sources: list[Callable[[], Iterable[Check]]] = [
        lambda: log_sandwich(grid.xs),
        lambda: log_ratio_derivative([x for x in xs_pos if x > 0], [2, 3, 4, 5, 7, 9, 16]),
        lambda: ratio_bound_monotone(xs_pos, [float(q) for q in range(2, 33)]),
        lambda: generator_count_bounds(fams),
        lambda: generator_product_real_eps([2, 3, 4, 5], [-1.5, -0.5, 0.0, 0.5, 1.0, 2.5], 24),
        lambda: gauss_upper(grid.qs_small, grid.n_max),
        lambda: gauss_lower(grid.qs_small, grid.n_max),
        lambda: psi_bounds([q for q in grid.qs_large if q <= 16], 30),
        lambda: b_constant_bounds(family_grid([3, 4, 5, 9], 24)),
        lambda: example_size_lower(fams),
        lambda: final_comparison(grid.qs_large, [0, 1, 2, 3, 4], grid.z_max),
    ]
    for src in sources:
        for c in src():
            rep.add(c)
    return rep
