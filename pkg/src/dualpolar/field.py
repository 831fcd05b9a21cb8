"""Small finite fields as lookup tables.

Elements of GF(p^k) (k = 1 or 2) are encoded as integers ``a0 + p*a1``.  The
tables are numpy arrays so that whole batches of vectors can be pushed
through an operation with fancy indexing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SUPPORTED_Q = (2, 3, 4, 5, 7, 9)

# x^2 + c1*x + c0 stored as (c0, c1)
_MODULI = {4: (1, 1), 9: (1, 0)}
_PRIME_POWER = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 9: (3, 2)}


@dataclass(frozen=True, eq=False)
class FieldSpec:
    p: int
    deg: int
    modulus: tuple[int, ...] | None
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    conj: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.deg

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, p={self.p}, deg={self.deg}, modulus={self.modulus})"


def _poly_mul(a: int, b: int, p: int, modulus: tuple[int, int]) -> int:
    a0, a1 = a % p, a // p
    b0, b1 = b % p, b // p
    c0, c1, c2 = a0 * b0, a0 * b1 + a1 * b0, a1 * b1
    m0, m1 = modulus
    # x^2 = -m1*x - m0
    c0 -= c2 * m0
    c1 -= c2 * m1
    return (c0 % p) + p * (c1 % p)


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    if q not in _PRIME_POWER:
        raise ValueError(f"unsupported field order q={q}; supported: {SUPPORTED_Q}")
    p, deg = _PRIME_POWER[q]
    idx = np.arange(q)
    if deg == 1:
        add = (idx[:, None] + idx[None, :]) % p
        mul = (idx[:, None] * idx[None, :]) % p
        modulus = None
    else:
        modulus = _MODULI[q]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = (a % p + b % p) % p + p * ((a // p + b // p) % p)
                mul[a, b] = _poly_mul(a, b, p, modulus)
    add = add.astype(np.uint8)
    mul = mul.astype(np.uint8)
    neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.uint8)
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    # Frobenius x -> x^p is the involution used by Hermitian forms.
    conj = np.empty(q, dtype=np.uint8)
    for a in range(q):
        v = 1
        for _ in range(p):
            v = int(mul[v, a])
        conj[a] = v if deg == 2 else a
    for tab in (add, mul, neg, inv, conj):
        tab.setflags(write=False)
    return FieldSpec(p, deg, modulus, add, mul, neg, inv, conj)
