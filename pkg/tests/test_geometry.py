import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualpolar.bounds import example_size_exact
from dualpolar.field import make_field
from dualpolar.geometry import (
    EnumerationCapError, Subspace, build_graph, codim_profile_matches, example_even, example_odd,
    intersection_dim, is_totally_isotropic, point_pencil, rank, rref,
)
from dualpolar.qcore import PolarParams, count_codim, num_generators, omega
from dualpolar.search import EKRInstance, is_ekr, maximal_extension_free

SMALL = [("W", 2, 2), ("W", 2, 3), ("Qplus", 2, 2), ("Qplus", 2, 3), ("Q", 2, 2), ("Q", 2, 3),
         ("Qminus", 2, 2), ("Qminus", 2, 3), ("Hodd", 4, 2), ("Heven", 4, 2), ("W", 3, 2),
         ("Q", 3, 2), ("Qplus", 3, 3), ("Qminus", 3, 2), ("W", 4, 2), ("Hodd", 9, 2)]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
def test_field_axioms(q):
    F = make_field(q)
    for a in range(q):
        assert F.add[a, F.neg[a]] == 0
        assert F.mul[a, 1] == a
        if a:
            assert F.mul[a, F.inv[a]] == 1
    for a in range(q):
        for b in range(q):
            for c in range(q):
                assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]


@given(st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=1, max_size=5))
@settings(max_examples=60)
def test_rref_is_idempotent_and_rank_bounded(rows):
    R = rref(rows, 3)
    assert rref(R, 3) == R
    assert rank(rows, 3) <= min(len(rows), 4)
    for r in R:
        assert r[next(i for i, x in enumerate(r) if x)] == 1


def test_intersection_dim_gf2():
    a = Subspace.span([(1, 0, 0, 0), (0, 1, 0, 0)], 2)
    b = Subspace.span([(0, 1, 0, 0), (0, 0, 1, 0)], 2)
    assert intersection_dim(a, b) == 1
    assert intersection_dim(a, a) == 2


@pytest.mark.parametrize("family,q,d", SMALL)
def test_enumeration_matches_formula_and_profiles(family, q, d, G):
    g = G(family, q, d)
    p = g.params
    assert g.n == num_generators(p)
    assert codim_profile_matches(g)
    assert np.array_equal(g.codim, g.codim.T)
    assert not np.any(np.diag(g.codim))
    assert all(is_totally_isotropic(v, g.space.form) for v in g.vertices[:20])
    assert g.profile(0) == [count_codim(p, s) for s in range(d + 1)]


def test_cap_is_enforced():
    with pytest.raises(EnumerationCapError):
        build_graph(PolarParams("W", 3, 4), cap=1000)


def test_index_of_round_trip(G):
    g = G("W", 2, 3)
    for i in (0, 17, 134):
        assert g.index_of(g.vertices[i]) == i


def _hyperplane_of(g, v):
    return Subspace.span(g.vertices[v].basis[:-1], g.params.q, g.space.m)


def test_point_pencil_size(G):
    g = G("W", 2, 3)
    P = Subspace.span(g.vertices[0].basis[:1], 2, g.space.m)
    pencil = point_pencil(g, P)
    assert len(pencil) == omega(g.params, 2) == 15
    assert maximal_extension_free(EKRInstance.of(g, 2), pencil)


@pytest.mark.parametrize("family,q,d", [("W", 2, 3), ("Qplus", 2, 3), ("Q", 2, 3), ("Qminus", 2, 3),
                                        ("W", 3, 2), ("Hodd", 4, 2)])
def test_examples_are_maximal_and_sized(family, q, d, G):
    g = G(family, q, d)
    for t in range(0, d + 1, 2):
        S = example_even(g, 0, t)
        assert len(S) == example_size_exact(g.params, t)
        inst = EKRInstance.of(g, t)
        assert is_ekr(inst, S)
        if 0 < t < d:
            assert maximal_extension_free(inst, S)
    for t in range(1, d + 1, 2):
        S = example_odd(g, _hyperplane_of(g, 0), t)
        assert len(S) == example_size_exact(g.params, t)
        inst = EKRInstance.of(g, t)
        assert is_ekr(inst, S)
        if t < d:
            assert maximal_extension_free(inst, S)


@pytest.mark.slow
def test_odd_example_size_rank_four():
    g = build_graph(PolarParams("W", 2, 4))
    for v in (0, 1000):
        assert len(example_odd(g, _hyperplane_of(g, v), 3)) == example_size_exact(g.params, 3)


def test_example_argument_validation(G):
    g = G("W", 2, 3)
    with pytest.raises(ValueError):
        example_even(g, 0, 1)
    with pytest.raises(ValueError):
        example_odd(g, _hyperplane_of(g, 0), 2)
    not_ti = Subspace.span([(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)], 2)
    with pytest.raises(ValueError):
        point_pencil(g, not_ti)
