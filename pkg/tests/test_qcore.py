from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from dualpolar import qcore
from dualpolar.qcore import Family, PolarParams, gauss, num_generators, omega, qpow_half

from conftest import dim2, subspaces_gf2


@lru_cache(maxsize=None)
def _subs(n):
    return subspaces_gf2(n)


def test_gauss_small_values():
    assert gauss(4, 2, 2) == 35
    assert gauss(3, 1, 3) == 13
    assert gauss(5, 0, 4) == gauss(5, 5, 4) == 1
    assert gauss(3, 4, 2) == gauss(3, -1, 2) == 0


def test_gauss_counts_subspaces_gf2():
    for n in range(1, 6):
        subs = _subs(n)
        for k in range(n + 1):
            assert sum(1 for S in subs if dim2(S) == k) == gauss(n, k, 2)


@given(st.integers(0, 14), st.integers(0, 14), st.sampled_from([2, 3, 4, 5, 7, 9]))
def test_gauss_symmetry_and_pascal(n, k, q):
    assert gauss(n, k, q) == gauss(n, n - k, q) if k <= n else gauss(n, k, q) == 0
    assert gauss(n + 1, k + 1, q) == gauss(n, k, q) + q ** (k + 1) * gauss(n, k + 1, q)


@given(st.integers(1, 10), st.integers(0, 10), st.sampled_from([2, 3, 4]))
def test_alternating_sum_identity(n, a, q):
    a = min(a, n)
    left, right = qcore.alternating_gauss_sum(n, a, q)
    assert left == right


def test_qpow_half():
    assert qpow_half(4, 3) == 8
    assert qpow_half(9, 1) == 3
    assert qpow_half(2, -2) == Fraction(1, 2)
    with pytest.raises(ValueError):
        qpow_half(2, 1)


def test_family_parsing_and_eps():
    assert [f.twice_eps for f in Family] == [0, 1, 2, 2, 3, 4]
    assert Family.parse("q+") is Family.QPLUS
    assert Family.parse("QMINUS") is Family.QMINUS
    with pytest.raises(ValueError):
        Family.parse("nope")


@pytest.mark.parametrize("args", [("W", 6, 2), ("W", 2, 0), ("Hodd", 2, 2), ("Heven", 5, 2)])
def test_params_rejects_bad_input(args):
    with pytest.raises(ValueError):
        PolarParams(*args)


@pytest.mark.parametrize("family,q,d,n", [
    ("W", 2, 3, 135), ("W", 2, 2, 15), ("Qplus", 2, 3, 30), ("Qminus", 2, 2, 45),
    ("Q", 2, 2, 15), ("Hodd", 4, 2, 27), ("Heven", 4, 2, 297), ("W", 3, 2, 40),
])
def test_num_generators_closed_form(family, q, d, n):
    assert num_generators(PolarParams(family, q, d)) == n


def test_codim_counts_sum_to_n():
    for fam in Family:
        q = 4 if fam.hermitian else 3
        for d in range(1, 7):
            p = PolarParams(fam, q, d)
            assert sum(qcore.count_codim(p, s) for s in range(d + 1)) == num_generators(p)


def test_omega_endpoints():
    p = PolarParams("W", 2, 3)
    assert [omega(p, r) for r in range(4)] == [1, 3, 15, 135]
    assert omega(p, -1) == omega(p, 4) == 0


def _meet_dim(A, B):
    return dim2(A & B)


def test_psi12_psi2_brute_force_gf2():
    for n in (4, 5):
        subs = _subs(n)
        by_dim = {k: [S for S in subs if dim2(S) == k] for k in range(n + 1)}
        for s in range(n + 1):
            fixed = by_dim[s][0]
            for r in range(n + 1):
                for u in range(min(r, s) + 1):
                    count = sum(1 for R in by_dim[r] if _meet_dim(R, fixed) == u)
                    assert count == qcore.psi2(n, r, s, u, 2), (n, r, s, u)
                    inner = sorted(S for S in by_dim[u] if S <= fixed)
                    if inner:
                        U = inner[0]
                        exact = sum(1 for R in by_dim[r] if R & fixed == U)
                        assert exact == qcore.psi12(n, r, s, u, 2), (n, r, s, u)


def test_psi3_brute_force_gf2():
    n = 5
    subs = _subs(n)
    by_dim = {k: [S for S in subs if dim2(S) == k] for k in range(n + 1)}
    for x in range(n + 1):
        X = by_dim[x][0]
        for y in range(x + 1):
            Y = next(S for S in by_dim[y] if S <= X)
            for z in range(n + 1):
                for z2 in range(min(z, x) + 1):
                    for z1 in range(min(z2, y) + 1):
                        count = sum(1 for Z in by_dim[z]
                                    if _meet_dim(Z, X) == z2 and _meet_dim(Z, Y) == z1)
                        assert count == qcore.psi3(n, x, y, z, z1, z2, 2), (x, y, z, z1, z2)


def _rank_gf2(rows):
    rows, r = list(rows), 0
    for bit in reversed(range(16)):
        piv = next((i for i in range(r, len(rows)) if rows[i] >> bit & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> bit & 1:
                rows[i] ^= rows[r]
        r += 1
    return r


def test_psi_bar_odd_hyperplane_count():
    # 7-spaces of GF(2)^8 are kernels of nonzero functionals f; f restricted to a fixed
    # 4-space S has rank 1 exactly when the kernel meets S in a 3-space
    basis = [1, 2, 4, 8]
    count = 0
    for f in range(1, 256):
        restricted = [bin(f & b).count("1") & 1 for b in basis]
        count += _rank_gf2([sum(restricted)] if any(restricted) else []) == 1
    assert count == 240 == qcore.psi_bar_odd(8, 3, 2)


def test_psi_closed_forms_match_definitions():
    for q in (2, 3, 4):
        for d in range(1, 14):
            for t in range(0, 9, 2):
                assert qcore.psi_even(d, t, q) == qcore.psi_even_by_definition(d, t, q)
            for t in range(1, 10, 2):
                assert qcore.psi_odd(d, t, q) == qcore.psi_odd_by_definition(d, t, q)
                assert qcore.psi_bar_odd(d, t, q) == qcore.psi_bar_odd_by_definition(d, t, q)


def test_psi_parity_guard():
    with pytest.raises(ValueError):
        qcore.psi_even(8, 3, 2)
    with pytest.raises(ValueError):
        qcore.psi_odd(8, 2, 2)
