"""Bounds on (d,t)-EKR sets and the constants of the stability argument.

Integer and rational quantities are exact.  The only floating point values
are the ones depending on ``alpha`` (the root of a log equation); those are
inflated by a few ulps so that a bound never moves in the unsafe direction.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

from .qcore import (
    PolarParams, binom2, count_codim, gauss, num_generators, omega,
    psi_bar_odd, psi_even, psi_odd, qpow_half,
)
from .spectra import extremal_eigs, lam

ULP_INFLATION = 4


def inflate(x: float, ulps: int = ULP_INFLATION) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, math.inf)
    return x


def deflate(x: float, ulps: int = ULP_INFLATION) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -math.inf)
    return x


def gamma(q: int) -> Fraction:
    if q < 3:
        raise ValueError("gamma is defined for q >= 3")
    return Fraction(2) if q == 3 else 1 + Fraction(2, q)


def alpha(q: float, eps: float) -> float:
    """The alpha > 1 with alpha*log(1+q^(-eps-1)) = log(1+q^(-eps))."""
    return math.log1p(q ** -eps) / math.log1p(q ** (-eps - 1))


def generator_ratio_bound(q: float, eps: float) -> float:
    """(1+q^-eps)^(alpha/(alpha-1)), an upper bound for n / q^(d*eps + C(d,2))."""
    a = alpha(q, eps)
    return (1 + q ** -eps) ** (a / (a - 1))


@dataclass(frozen=True)
class BoundContext:
    q: int
    twice_eps: int

    @property
    def eps(self) -> Fraction:
        return Fraction(self.twice_eps, 2)

    @property
    def alpha(self) -> float:
        return alpha(self.q, float(self.eps))

    @property
    def gamma(self) -> Fraction:
        return gamma(self.q)

    @property
    def ratio_bound(self) -> float:
        return generator_ratio_bound(self.q, float(self.eps))

    def alpha_residual(self) -> float:
        e = float(self.eps)
        return self.alpha * math.log1p(self.q ** (-e - 1)) - math.log1p(self.q ** -e)


# -- Hoffman ---------------------------------------------------------------------

def _check_t_inner(p: PolarParams, t: int) -> None:
    if not 0 < t < p.d:
        raise ValueError(f"t={t} must satisfy 0 < t < d={p.d}")


@lru_cache(maxsize=None)
def hoffman_bound(p: PolarParams, t: int) -> Fraction:
    _check_t_inner(p, t)
    a = p.d - t - 1
    (lam_min, _), _ = extremal_eigs(p, a)
    k = lam(p, 0, a)
    n = num_generators(p)
    return Fraction(n * lam_min, lam_min - k)


def hoffman_floor(p: PolarParams, t: int) -> int:
    return math.floor(hoffman_bound(p, t))


def explicit_hoffman(p: PolarParams, t: int) -> float:
    """Closed-form relaxation of the Hoffman bound (q >= 3 only)."""
    if p.q < 3:
        raise ValueError("the explicit Hoffman estimate is stated for q >= 3 only")
    _check_t_inner(p, t)
    ctx = BoundContext(p.q, p.twice_eps)
    d, e2 = p.d, p.twice_eps
    if t % 2 == 1 or e2 >= 2:
        half_exp = 2 * (t * (d - t - 1) + binom2(t)) + t * e2
    else:
        half_exp = 2 * (t * (d - t - 1) + binom2(t + 1))
    log_value = (math.log(float(ctx.gamma)) + math.log(ctx.ratio_bound)
                 + half_exp / 2 * math.log(p.q))
    return inflate(math.exp(log_value)) if log_value < 700 else math.inf


def explicit_hoffman_log(p: PolarParams, t: int) -> float:
    """Natural log of the explicit estimate, usable when the value itself overflows."""
    if p.q < 3:
        raise ValueError("the explicit Hoffman estimate is stated for q >= 3 only")
    _check_t_inner(p, t)
    ctx = BoundContext(p.q, p.twice_eps)
    d, e2 = p.d, p.twice_eps
    if t % 2 == 1 or e2 >= 2:
        half_exp = 2 * (t * (d - t - 1) + binom2(t)) + t * e2
    else:
        half_exp = 2 * (t * (d - t - 1) + binom2(t + 1))
    return inflate(math.log(float(ctx.gamma)) + math.log(ctx.ratio_bound) + half_exp / 2 * math.log(p.q))


# -- certified substitutes for the unknown clique numbers --------------------------

@dataclass(frozen=True)
class CertifiedC:
    rank: int
    t: int
    value: int
    source: str  # "trivial" | "hoffman" | "none"


@lru_cache(maxsize=None)
def certified_c(p: PolarParams, rank: int, t: int) -> CertifiedC:
    """Best certified upper bound on c_{rank,t} for the family and q of p."""
    if rank < 1:
        return CertifiedC(rank, t, 0, "none")
    sub = p.with_rank(rank)
    trivial = num_generators(sub)
    if 0 < t < rank:
        hf = hoffman_floor(sub, t)
        if hf < trivial:
            return CertifiedC(rank, t, hf, "hoffman")
    return CertifiedC(rank, t, trivial, "trivial")


@dataclass
class BConstants:
    t: int
    b1: int
    b2: int
    b3: int | None
    c_used: CertifiedC | None

    @property
    def total(self) -> int:
        """b1 + b2 for even t, 2*b1 + b2 + b3 for odd t."""
        if self.b3 is None:
            return self.b1 + self.b2
        return 2 * self.b1 + self.b2 + self.b3


def b_even(p: PolarParams, t: int) -> BConstants:
    if t % 2 or t < 0:
        raise ValueError(f"t={t} must be even")
    if p.d < 2 * t:
        raise ValueError(f"need d >= 2t, got d={p.d}, t={t}")
    d, q, e2 = p.d, p.q, p.twice_eps
    h = t // 2
    g = gauss(d - 3 * h, h - 1, q)
    c = certified_c(p, 2 * t - 1, t) if g else None
    b1 = g * c.value if g else 0
    b2 = qpow_half(q, e2 * h + 2 * binom2(h)) * psi_even(d, t, q)
    return BConstants(t, b1, b2, None, c)


def b_odd(p: PolarParams, t: int) -> BConstants:
    if t % 2 == 0 or t < 0:
        raise ValueError(f"t={t} must be odd")
    if p.d < 2 * t - 1:
        raise ValueError(f"need d >= 2t-1, got d={p.d}, t={t}")
    d, q, e2 = p.d, p.q, p.twice_eps
    h = (t - 1) // 2
    g = gauss(d - 3 * h - 1, h - 1, q)
    c = certified_c(p, 2 * t - 2, t) if g else None
    b1 = g * c.value if g else 0
    b2 = omega(p, h + 1) * psi_odd(d, t, q)
    b3 = qpow_half(q, e2 * h + 2 * binom2(h)) * psi_bar_odd(d, t, q)
    return BConstants(t, b1, b2, b3, c)


def b_constants(p: PolarParams, t: int) -> BConstants:
    return b_odd(p, t) if t % 2 else b_even(p, t)


# -- sizes of the examples ------------------------------------------------------

def y_lower(p: PolarParams, t: int) -> int:
    """Lower bound for the size of the even/odd example."""
    if not 0 <= t <= p.d:
        raise ValueError(f"t={t} outside 0..{p.d}")
    d, q, e2 = p.d, p.q, p.twice_eps
    if t % 2 == 0:
        h = t // 2
        return gauss(d, h, q) * qpow_half(q, e2 * h + 2 * binom2(h))
    k = (t + 1) // 2
    return gauss(d - 1, k - 1, q) * (qpow_half(q, e2 * k + 2 * binom2(k))
                                     + qpow_half(q, e2 * (k - 1) + 2 * binom2(k)))


def example_size_exact(p: PolarParams, t: int) -> int:
    """Exact size of the even example (ball around a generator) or odd example (around a (d-1)-space)."""
    if not 0 <= t <= p.d:
        raise ValueError(f"t={t} outside 0..{p.d}")
    if t % 2 == 0:
        return sum(count_codim(p, s) for s in range(t // 2 + 1))
    d, q, e2 = p.d, p.q, p.twice_eps
    total = 0
    # R = codimension of H ∩ U inside the quotient of rank R at H ∩ U
    for R in range(1, (t + 1) // 2 + 1):
        per_subspace = qpow_half(q, 2 * binom2(R) + e2 * (R - 1)) * (qpow_half(q, e2) + 1)
        total += gauss(d - 1, R - 1, q) * per_subspace
    return total


# -- degree gaps and the threshold --------------------------------------------------

def delta_gaps(p: PolarParams, t: int) -> dict[str, Fraction]:
    return delta_gaps_raw(p.twice_eps, p.d, t)


def delta_gaps_raw(twice_eps: int, d: int, t: int) -> dict[str, Fraction]:
    eps = Fraction(twice_eps, 2)
    t = Fraction(t)
    if eps >= 1:
        d1e = d + 1 - (2 * eps + 1) * t / 4 - Fraction(5, 8) * t * t
    else:
        d1e = d + 1 - (5 - 2 * eps) * t / 4 - Fraction(5, 8) * t * t
    return {
        "delta1_even": d1e,
        "delta2_even": d + 2 - Fraction(5, 2) * t,
        "delta1_odd": d + Fraction(25, 8) + eps / 2 - (eps + 1) * t / 2 - Fraction(5, 8) * t * t,
        "delta2_odd": d + Fraction(7, 2) - Fraction(5, 2) * t,
        "delta3_odd": eps,
    }


def threshold(p: PolarParams, t: int) -> bool:
    return threshold_raw(p.q, p.d, t)


def threshold_raw(q: int, d: int, t: int) -> bool:
    """t <= sqrt(8d/5) - 2 for q >= 3 and t <= sqrt(8d/9) - 2 for q = 2, decided exactly."""
    if t < 0:
        return False
    return (9 if q == 2 else 5) * (t + 2) ** 2 <= 8 * d


def stability_verdict(p: PolarParams, t: int) -> bool:
    """Whether the example beats the certified stability bound at (d, t)."""
    b = b_constants(p, t)
    return example_size_exact(p, t) > b.total


def gap_obligation(twice_eps: int, d: int, t: int) -> bool:
    """The degree-gap conditions the main threshold argument needs."""
    g = delta_gaps_raw(twice_eps, d, t)
    if t % 2 == 0:
        return t == 0 or (g["delta1_even"] >= 3 and g["delta2_even"] >= 3)
    return t == 1 or (g["delta1_odd"] >= 4 and g["delta2_odd"] >= 4)


# -- report ---------------------------------------------------------------------

@dataclass
class BoundReport:
    params: PolarParams
    t: int
    n: int
    hoffman: Fraction | None = None
    hoffman_floor: int | None = None
    explicit_bound: float | None = None
    lp_bound: Fraction | None = None
    b_constants: BConstants | None = None
    y_lower: int | None = None
    example_size_exact: int | None = None
    delta_gaps: dict[str, Fraction] = field(default_factory=dict)
    threshold_ok: bool = False
    stability_ok: bool | None = None

    def to_json(self) -> dict:
        def enc(x):
            if x is None:
                return None
            if isinstance(x, bool):
                return x
            if isinstance(x, (int, Fraction)):
                return str(x)
            if isinstance(x, float):
                return repr(x)
            return x

        p = self.params
        b = self.b_constants
        out = {
            "schema_version": 1,
            "params": {"family": p.family.value, "q": p.q, "d": p.d},
            "t": self.t,
            "n": enc(self.n),
            "hoffman": enc(self.hoffman),
            "hoffman_floor": enc(self.hoffman_floor),
            "explicit_bound": enc(self.explicit_bound),
            "lp_bound": enc(self.lp_bound),
            "y_lower": enc(self.y_lower),
            "example_size_exact": enc(self.example_size_exact),
            "delta_gaps": {k: enc(v) for k, v in self.delta_gaps.items()},
            "threshold_ok": self.threshold_ok,
            "stability_ok": self.stability_ok,
            "b_constants": None,
        }
        if b is not None:
            c = asdict(b.c_used) if b.c_used else None
            if c:
                c["value"] = str(c["value"])
            out["b_constants"] = {"b1": enc(b.b1), "b2": enc(b.b2), "b3": enc(b.b3),
                                  "c_substitute": c}
        return out


CSV_COLUMNS = [
    "family", "q", "d", "t", "n", "hoffman", "hoffman_floor", "explicit_bound", "lp_bound",
    "b1", "b2", "b3", "c_source", "y_lower", "example_size_exact",
    "delta1_even", "delta2_even", "delta1_odd", "delta2_odd", "delta3_odd",
    "threshold_ok", "stability_ok",
]


def report_csv_row(r: BoundReport) -> list[str]:
    def s(x):
        if x is None:
            return ""
        if isinstance(x, float):
            return repr(x)
        return str(x)

    b = r.b_constants
    row = {
        "family": r.params.family.value, "q": r.params.q, "d": r.params.d, "t": r.t, "n": r.n,
        "hoffman": r.hoffman, "hoffman_floor": r.hoffman_floor,
        "explicit_bound": r.explicit_bound, "lp_bound": r.lp_bound,
        "b1": b.b1 if b else None, "b2": b.b2 if b else None, "b3": b.b3 if b else None,
        "c_source": b.c_used.source if b and b.c_used else None,
        "y_lower": r.y_lower, "example_size_exact": r.example_size_exact,
        **r.delta_gaps,
        "threshold_ok": r.threshold_ok, "stability_ok": r.stability_ok,
    }
    return [s(row.get(c)) for c in CSV_COLUMNS]


def bound_report(p: PolarParams, t: int, with_lp: bool = False) -> BoundReport:
    if not 0 <= t <= p.d:
        raise ValueError(f"t={t} outside 0..{p.d}")
    r = BoundReport(p, t, num_generators(p))
    if 0 < t < p.d:
        r.hoffman = hoffman_bound(p, t)
        r.hoffman_floor = math.floor(r.hoffman)
        if p.q >= 3:
            r.explicit_bound = explicit_hoffman(p, t)
    if with_lp:
        from .lp import delsarte_lp
        r.lp_bound = delsarte_lp(p, t).value
    if (t % 2 == 0 and p.d >= 2 * t) or (t % 2 == 1 and p.d >= 2 * t - 1):
        r.b_constants = b_constants(p, t)
        r.stability_ok = example_size_exact(p, t) > r.b_constants.total
    if 2 <= t <= p.d - 2:
        r.y_lower = y_lower(p, t)
    r.example_size_exact = example_size_exact(p, t)
    r.delta_gaps = delta_gaps(p, t)
    r.threshold_ok = threshold(p, t)
    return r
