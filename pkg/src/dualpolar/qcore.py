"""Exact q-analog counting for finite classical polar spaces.

Everything here works over Python integers.  The type parameter of a polar
space can be a half-integer, so it is stored doubled (``twice_eps``) and every
power ``q**(k*eps)`` goes through :func:`qpow_half`, which uses the square
root of ``q`` when the exponent is odd in half-steps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt


class Family(enum.Enum):
    """The six families of finite classical polar spaces."""

    QPLUS = "Qplus"     # hyperbolic quadric Q+(2d-1, q)
    HODD = "Hodd"       # Hermitian H(2d-1, q)
    Q = "Q"             # parabolic quadric Q(2d, q)
    W = "W"             # symplectic W(2d-1, q)
    HEVEN = "Heven"     # Hermitian H(2d, q)
    QMINUS = "Qminus"   # elliptic quadric Q-(2d+1, q)

    @property
    def twice_eps(self) -> int:
        return _TWICE_EPS[self]

    @property
    def hermitian(self) -> bool:
        return self in (Family.HODD, Family.HEVEN)

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip()
        for fam in cls:
            if key == fam.value or key.upper() == fam.name:
                return fam
        alias = _ALIASES.get(key.lower())
        if alias is None:
            raise ValueError(f"unknown polar space family {name!r}")
        return alias


_TWICE_EPS = {
    Family.QPLUS: 0,
    Family.HODD: 1,
    Family.Q: 2,
    Family.W: 2,
    Family.HEVEN: 3,
    Family.QMINUS: 4,
}

_ALIASES = {
    "q+": Family.QPLUS, "hyperbolic": Family.QPLUS,
    "q-": Family.QMINUS, "elliptic": Family.QMINUS,
    "parabolic": Family.Q, "symplectic": Family.W,
    "h": Family.HODD,
}


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def square_root(q: int) -> int | None:
    r = isqrt(q)
    return r if r * r == q else None


@dataclass(frozen=True)
class PolarParams:
    family: Family
    q: int
    d: int

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family.parse(str(self.family)))
        if not is_prime_power(self.q):
            raise ValueError(f"q={self.q} is not a prime power")
        if self.d < 1:
            raise ValueError(f"rank d={self.d} must be at least 1")
        if self.twice_eps % 2 and square_root(self.q) is None:
            raise ValueError(f"{self.family.value} needs a square q, got q={self.q}")

    @property
    def twice_eps(self) -> int:
        return self.family.twice_eps

    @property
    def eps(self) -> Fraction:
        return Fraction(self.twice_eps, 2)

    def with_rank(self, d: int) -> "PolarParams":
        return PolarParams(self.family, self.q, d)

    def label(self) -> str:
        return f"{self.family.value}(q={self.q},d={self.d})"


def qpow_half(q: int, half_steps: int) -> int | Fraction:
    """Return ``q ** (half_steps / 2)`` exactly.

    Odd ``half_steps`` need ``q`` to be a perfect square.  A negative exponent
    gives a :class:`~fractions.Fraction`.
    """
    if half_steps % 2 == 0:
        base, e = q, half_steps // 2
    else:
        r = square_root(q)
        if r is None:
            raise ValueError(f"q={q} is not a square; cannot take q^({half_steps}/2)")
        base, e = r, half_steps
    if e >= 0:
        return base ** e
    return Fraction(1, base ** (-e))


def binom2(n: int) -> int:
    """``n choose 2`` as the polynomial n(n-1)/2 (valid for negative n too)."""
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def gauss(n: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient; 0 unless 0 <= k <= n."""
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    num, den = 1, 1
    for i in range(1, k + 1):
        num *= q ** (n - i + 1) - 1
        den *= q ** i - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def _eps_product(q: int, twice_eps: int, r: int) -> int:
    value = 1
    for i in range(r):
        value *= qpow_half(q, 2 * i + twice_eps) + 1
    return value


def num_generators(p: PolarParams) -> int:
    return _eps_product(p.q, p.twice_eps, p.d)


def omega(p: PolarParams, r: int) -> int:
    """Generators through a fixed totally isotropic (d-r)-space."""
    if r < 0 or r > p.d:
        return 0
    return _eps_product(p.q, p.twice_eps, r)


def count_codim(p: PolarParams, s: int) -> int:
    """Generators meeting a fixed generator in codimension exactly ``s``."""
    if s < 0 or s > p.d:
        raise ValueError(f"codimension s={s} outside 0..{p.d}")
    return gauss(p.d, p.d - s, p.q) * qpow_half(p.q, 2 * binom2(s) + s * p.twice_eps)


# -- subspace counts in F_q^d ---------------------------------------------------

def psi12(d: int, r: int, s: int, u: int, q: int) -> int:
    """r-spaces of F_q^d meeting a fixed s-space in a fixed u-space."""
    if not 0 <= u <= s <= d:
        return 0
    g = gauss(d - s, r - u, q)
    if g == 0:
        return 0
    return q ** ((r - u) * (s - u)) * g


def psi2(d: int, r: int, s: int, u: int, q: int) -> int:
    """r-spaces of F_q^d meeting a fixed s-space in some u-space."""
    if not 0 <= s <= d:
        return 0
    return gauss(s, u, q) * psi12(d, r, s, u, q)


def psi3(d: int, x: int, y: int, z: int, z1: int, z2: int, q: int) -> int:
    """z-spaces meeting a fixed x-space X in a z2-space and a fixed y-space Y <= X in a z1-space."""
    if not 0 <= y <= x <= d:
        return 0
    return psi2(x, z2, y, z1, q) * psi12(d, z, x, z2, q)


def _check_parity(t: int, odd: bool) -> None:
    if t < 0 or (t % 2 == 1) != odd:
        raise ValueError(f"t={t} must be a non-negative {'odd' if odd else 'even'} integer")


def psi_even(d: int, t: int, q: int) -> int:
    _check_parity(t, odd=False)
    h = t // 2
    total = 0
    for i in range(1, h):
        total += q ** ((h - 1 - i) * (h - i)) * gauss(d - 2 * t + 1, h - i, q) * gauss(h - 1, i, q)
    return q ** (3 * t * t // 4) * total


def psi_odd(d: int, t: int, q: int) -> int:
    _check_parity(t, odd=True)
    h = (t - 1) // 2
    total = 0
    for i in range(1, h):
        total += q ** ((h - 1 - i) * (h - i)) * gauss(d - 2 * t + 2, h - i, q) * gauss(h - 1, i, q)
    return q ** (3 * h * h) * total


def psi_bar_odd(d: int, t: int, q: int) -> int:
    _check_parity(t, odd=True)
    h = (t - 1) // 2
    g = gauss(d - 3 * h - 1, h, q)
    if g == 0:
        return 0
    return q ** ((3 * h + 1) * h) * g


def psi_even_by_definition(d: int, t: int, q: int) -> int:
    """The defining sum of psi3 terms, kept apart from the closed form for cross-checks."""
    _check_parity(t, odd=False)
    h = t // 2
    return sum(
        psi3(d, d - 3 * h, d - 2 * t + 1, d - h, d - 5 * h + 1 + i, d - 2 * t, q)
        for i in range(1, h)
    )


def psi_odd_by_definition(d: int, t: int, q: int) -> int:
    _check_parity(t, odd=True)
    h = (t - 1) // 2
    # d - 3t/2 + 1/2 = d - 3h - 1 and d - 5t/2 + 5/2 = d - 5h
    return sum(
        psi3(d - 1, d - 3 * h - 1, d - 2 * t + 2, d - h - 1, d - 5 * h + i, d - 2 * t + 1, q)
        for i in range(1, h)
    )


def psi_bar_odd_by_definition(d: int, t: int, q: int) -> int:
    _check_parity(t, odd=True)
    h = (t - 1) // 2
    return psi2(d, d - h, d - 3 * h - 1, d - 2 * t + 1, q)


def alternating_gauss_sum(n: int, a: int, q: int) -> tuple[int, int]:
    """Both sides of the alternating Gaussian sum identity (left, right)."""
    left = sum((-1) ** (n - k) * gauss(n, k, q) * q ** binom2(n - k) for k in range(a + 1))
    right = (-1) ** (n + a) * gauss(n - 1, a, q) * q ** binom2(n - a)
    return left, right
