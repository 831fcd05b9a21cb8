import numpy as np
import pytest

from dualpolar.qcore import Family, PolarParams, num_generators
from dualpolar.spectra import (
    SchemeSpectrum, commuting_relations, eigenvalue_P, extremal_eigs, lam, lam_from_P, lam_special_rows,
    matrix_polynomial_is_zero, multiplicities, p_matrix, q_matrix, verify_spectrum,
)

GRAPHS = [("W", 2, 2), ("W", 2, 3), ("Qplus", 2, 3), ("Qminus", 2, 2), ("Q", 2, 3), ("Hodd", 4, 2),
          ("W", 3, 2), ("Qminus", 2, 3)]


def test_w22_tables():
    p = PolarParams("W", 2, 2)
    assert p_matrix(p) == [[1, 6, 8], [1, 1, -2], [1, -3, 2]]
    assert multiplicities(p) == [1, 9, 5]
    assert [lam(p, r, 0) for r in range(3)] == [8, -2, 2]


def test_first_row_is_valencies():
    for fam in Family:
        q = 4 if fam.hermitian else 3
        p = PolarParams(fam, q, 4)
        row = p_matrix(p)[0]
        assert sum(row) == num_generators(p)


@pytest.mark.parametrize("fam", list(Family))
def test_lambda_agrees_with_eigenmatrix(fam):
    q = 4 if fam.hermitian else 3
    for d in range(1, 7):
        p = PolarParams(fam, q, d)
        for a in range(d):
            for r in range(d + 1):
                assert lam(p, r, a) == lam_from_P(p, r, a)
            for r in {1, d - 1, d} - {0}:
                assert lam_special_rows(p, r, a) == lam(p, r, a)


def test_scheme_identities_and_q_matrix():
    for fam in Family:
        q = 4 if fam.hermitian else 2
        p = PolarParams(fam, q, 3)
        spec = SchemeSpectrum.of(p)
        assert spec.check() == []
        P, Q = p_matrix(p), q_matrix(p)
        n = num_generators(p)
        for i in range(4):
            for j in range(4):
                assert sum(P[i][k] * Q[k][j] for k in range(4)) == (n if i == j else 0)


def test_extremal_eigs_returns_argmin():
    p = PolarParams("W", 3, 4)
    (lo, argmin), (hi, argmax) = extremal_eigs(p, 1)
    vals = [lam(p, r, 1) for r in range(1, 5)]
    assert lo == min(vals) and all(vals[r - 1] == lo for r in argmin)
    assert hi == max(abs(v) for v in vals)


@pytest.mark.parametrize("family,q,d", GRAPHS)
def test_annihilation_on_graphs(family, q, d, G):
    g = G(family, q, d)
    for t in range(d + 1):
        rep = verify_spectrum(g, t)
        assert rep.ok, rep


def test_perturbed_spectrum_is_rejected(G):
    g = G("W", 2, 3)
    M = (g.codim > 1).astype(np.int64)
    good = sorted({lam(g.params, r, 1) for r in range(4)})
    assert matrix_polynomial_is_zero(M, good)[0]
    bad = list(good)
    bad[-1] += 1
    ok, witness = matrix_polynomial_is_zero(M, bad)
    assert not ok and witness is not None


def test_relations_commute(G):
    assert commuting_relations(G("W", 2, 3))


def test_eigenvalue_index_guard():
    with pytest.raises(ValueError):
        eigenvalue_P(PolarParams("W", 2, 2), 3, 0)
