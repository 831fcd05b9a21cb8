import csv
import io
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualpolar.bounds import (
    CSV_COLUMNS, b_constants, b_even, b_odd, bound_report, certified_c, delta_gaps, example_size_exact,
    explicit_hoffman, gap_obligation, hoffman_bound, hoffman_floor, inflate, report_csv_row,
    stability_verdict, threshold, threshold_raw, y_lower,
)
from dualpolar.qcore import Family, PolarParams, num_generators


@pytest.mark.parametrize("fam,q,d,t,value", [
    ("W", 2, 2, 1, 3), ("Qplus", 2, 3, 2, 15), ("Hodd", 4, 2, 1, 3), ("W", 2, 3, 2, 15),
    ("W", 2, 3, 1, Fraction(45, 7)), ("Qminus", 2, 3, 2, 45), ("Qminus", 2, 3, 1, Fraction(135, 11)),
])
def test_hoffman_values(fam, q, d, t, value):
    assert hoffman_bound(PolarParams(fam, q, d), t) == value


def test_hoffman_domain():
    p = PolarParams("W", 2, 3)
    for t in (0, 3, 4):
        with pytest.raises(ValueError):
            hoffman_bound(p, t)


def test_hoffman_never_below_pencil():
    # the pencil of a (d-t)-space has omega(p, t) members and is an EKR set
    from dualpolar.qcore import omega
    for fam in Family:
        q = 4 if fam.hermitian else 3
        for d in range(2, 9):
            p = PolarParams(fam, q, d)
            for t in range(1, d):
                assert hoffman_floor(p, t) >= omega(p, t)


def test_explicit_requires_q3():
    with pytest.raises(ValueError):
        explicit_hoffman(PolarParams("W", 2, 4), 2)


def test_explicit_dominates_hoffman_sample():
    for fam in Family:
        q = 9 if fam.hermitian else 5
        for d in range(2, 10):
            p = PolarParams(fam, q, d)
            for t in range(1, d):
                assert Fraction(explicit_hoffman(p, t)) >= hoffman_bound(p, t)


def test_inflate_moves_up():
    assert inflate(1.0) > 1.0
    assert inflate(1.0) - 1.0 < 1e-14


def test_b2_even_vanishes_at_t2():
    for fam in Family:
        q = 4 if fam.hermitian else 3
        for d in range(4, 40):
            assert b_even(PolarParams(fam, q, d), 2).b2 == 0


def test_b_constants_known_value():
    b = b_odd(PolarParams("W", 2, 8), 3)
    assert b.b3 == 480
    assert b.total == 2 * b.b1 + b.b2 + b.b3


def test_b_constant_domain():
    p = PolarParams("W", 3, 5)
    with pytest.raises(ValueError):
        b_even(p, 3)
    with pytest.raises(ValueError):
        b_even(p, 4)
    with pytest.raises(ValueError):
        b_odd(PolarParams("W", 3, 4), 3)


def test_certified_c_sources():
    p = PolarParams("W", 3, 8)
    c = certified_c(p, 3, 2)
    assert c.source == "hoffman" and c.value == hoffman_floor(p.with_rank(3), 2)
    assert certified_c(p, 3, 3).source == "trivial"
    assert certified_c(p, 3, 3).value == num_generators(p.with_rank(3))


@pytest.mark.parametrize("fam,q,d,t,y,exact", [("W", 2, 4, 2, 30, 31), ("W", 2, 4, 3, 84, 87)])
def test_example_sizes(fam, q, d, t, y, exact):
    p = PolarParams(fam, q, d)
    assert y_lower(p, t) == y
    assert example_size_exact(p, t) == exact


def test_y_lower_below_exact():
    for fam in Family:
        q = 4 if fam.hermitian else 2
        for d in range(4, 14):
            p = PolarParams(fam, q, d)
            for t in range(2, d - 1):
                assert y_lower(p, t) <= example_size_exact(p, t)


def test_delta_gaps_exact():
    g = delta_gaps(PolarParams("W", 3, 10), 2)
    assert g["delta1_even"] == 7 and g["delta2_even"] == 7
    assert all(isinstance(v, Fraction) for v in g.values())
    assert all((8 * v).denominator == 1 for v in g.values())


@pytest.mark.parametrize("q,d,t,ok", [(3, 10, 2, True), (2, 17, 2, False), (2, 18, 2, True),
                                      (3, 9, 2, False), (4, 60, 6, True), (4, 60, 8, False)])
def test_threshold(q, d, t, ok):
    assert threshold(PolarParams("W", q, d), t) is ok


@given(st.integers(2, 9), st.integers(1, 200), st.integers(0, 20))
def test_threshold_matches_float(q, d, t):
    c = 9 if q == 2 else 5
    bound = math.sqrt(8 * d / c) - 2
    if abs(t - bound) > 1e-9:
        assert threshold_raw(q, d, t) == (t <= bound)


def test_threshold_implies_gap_obligation_and_stability():
    for e2 in range(5):
        for d in range(1, 61):
            for t in range(d + 1):
                if threshold_raw(3, d, t):
                    assert gap_obligation(e2, d, t)
    for fam in (Family.W, Family.QPLUS, Family.QMINUS, Family.Q):
        for d in range(20, 61, 10):
            p = PolarParams(fam, 3, d)
            for t in range(2, d + 1):
                if threshold(p, t):
                    assert stability_verdict(p, t)


def test_report_json_and_csv():
    r = bound_report(PolarParams("W", 3, 4), 2, with_lp=True)
    obj = r.to_json()
    assert obj["schema_version"] == 1
    assert obj["n"] == "91840" and obj["hoffman"] == "364"
    json.dumps(obj)
    row = report_csv_row(r)
    assert len(row) == len(CSV_COLUMNS)
    parsed = next(csv.reader(io.StringIO(",".join(row))))
    assert dict(zip(CSV_COLUMNS, parsed))["c_source"] == "hoffman"
    assert Fraction(dict(zip(CSV_COLUMNS, row))["lp_bound"]) <= 364


def test_report_fraction_strings():
    r = bound_report(PolarParams("W", 2, 3), 1)
    assert r.to_json()["hoffman"] == "45/7"
    assert dict(zip(CSV_COLUMNS, report_csv_row(r)))["hoffman"] == "45/7"
