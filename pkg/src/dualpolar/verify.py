"""Cross-module oracle suites shared by the CLI ``verify`` command and the tests."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import qcore
from .bounds import (
    b_constants, example_size_exact, explicit_hoffman, gap_obligation, hoffman_bound, hoffman_floor, stability_verdict,
    threshold, y_lower,
)
from .cache import load_graph
from .geometry import codim_profile_matches
from .inequalities import run_suite
from .lp import OPTIMAL, delsarte_lp
from .qcore import Family, PolarParams, gauss, num_generators
from .search import EKRInstance, check_extension_property, check_level_one_structure, max_ekr
from .spectra import (
    A_term, SchemeSpectrum, extremal_eigs, lam, lam_special_rows, lam_from_P, verify_spectrum,
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, cond: bool, witness) -> None:
        self.checked += 1
        if not cond:
            self.failures.append(witness)


def all_params(qs, d_max: int, families=tuple(Family)) -> list[PolarParams]:
    out = []
    for q in qs:
        for fam in families:
            if fam.hermitian and math.isqrt(q) ** 2 != q:
                continue
            out.extend(PolarParams(fam, q, d) for d in range(1, d_max + 1))
    return out


def small_graph_params(max_n: int, qs=(2, 3, 4, 5, 7, 9), d_max: int = 6) -> list[PolarParams]:
    return [p for p in all_params(qs, d_max) if num_generators(p) <= max_n]


# -- suites -----------------------------------------------------------------------

def suite_qcore(qs=(2, 3, 4, 5, 9), n_max: int = 12) -> SuiteResult:
    r = SuiteResult("qcore identities")
    for q in qs:
        for n in range(n_max + 1):
            for k in range(n + 1):
                r.expect(gauss(n, n - k, q) == gauss(n, k, q), ("duality", n, k, q))
                r.expect(gauss(n + 1, k + 1, q) == q ** (n - k) * gauss(n, k, q) + gauss(n, k + 1, q),
                         ("recurrence", n, k, q))
    for q in (2, 3, 4):
        for n in range(1, 11):
            for a in range(n + 1):
                left, right = qcore.alternating_gauss_sum(n, a, q)
                r.expect(left == right, ("alternating", n, a, q))
    for p in all_params(qs, 8):
        r.expect(sum(qcore.count_codim(p, s) for s in range(p.d + 1)) == num_generators(p),
                 ("codim sum", p))
    for q in (2, 3, 4):
        for d in range(1, 13):
            for t in range(0, d + 2):
                if t % 2 == 0:
                    r.expect(qcore.psi_even(d, t, q) == qcore.psi_even_by_definition(d, t, q), ("psi_even", d, t, q))
                else:
                    r.expect(qcore.psi_odd(d, t, q) == qcore.psi_odd_by_definition(d, t, q), ("psi_odd", d, t, q))
                    r.expect(qcore.psi_bar_odd(d, t, q) == qcore.psi_bar_odd_by_definition(d, t, q),
                             ("psi_bar_odd", d, t, q))
    return r


def suite_graphs(max_n: int = 1000, cache_dir=None) -> SuiteResult:
    r = SuiteResult("enumeration and codimension profiles")
    for p in small_graph_params(max_n, qs=(2, 3, 4)):
        g = load_graph(p, cache_dir)
        r.expect(g.n == num_generators(p), ("count", p, g.n))
        r.expect(codim_profile_matches(g), ("profile", p))
    return r


def suite_spectra(qs=(2, 3, 4, 5, 9), d_max: int = 8) -> SuiteResult:
    r = SuiteResult("eigenvalue formulas")
    for p in all_params(qs, d_max):
        d = p.d
        for a in range(d):
            for rr in range(d + 1):
                r.expect(lam(p, rr, a) == lam_from_P(p, rr, a), ("lam", p, rr, a))
            for rr in {1, d - 1, d} - {0}:
                r.expect(lam_special_rows(p, rr, a) == lam(p, rr, a), ("special rows", p, rr, a))
            r.expect(all(lam(p, rr, d - 1) == -1 for rr in range(1, d + 1)), ("a=d-1", p))
        if d == 2:
            r.expect(lam(p, 1, 0) == -qcore.qpow_half(p.q, p.twice_eps) and lam(p, 2, 0) == p.q,
                     ("d=2 values", p))
        r.expect(not SchemeSpectrum.of(p).check(), ("scheme identities", p))
    return r


def _extremal_case_violations(p: PolarParams, a: int) -> list[str]:
    """Violated extremal-eigenvalue cases at (p, a); stated for q >= 3."""
    d, e2 = p.d, p.twice_eps
    (lo, _), (hi, _) = extremal_eigs(p, a)
    l1, ld = lam(p, 1, a), lam(p, d, a)
    bad = []
    if e2 >= 2 and abs(l1) != hi:
        bad.append("max |lambda| not at r=1")
    if e2 <= 2 and abs(ld) != hi:
        bad.append("max |lambda| not at r=d")
    if ((d - a) % 2 == 0 or e2 >= 2) and l1 != lo:
        bad.append("min not at r=1")
    if (d - a) % 2 == 1 and e2 <= 2 and ld != lo:
        bad.append("min not at r=d")
    return bad


def suite_extremal(qs=(3, 4, 5, 9), d_max: int = 8) -> SuiteResult:
    r = SuiteResult("extremal eigenvalue positions")
    for p in all_params(qs, d_max):
        for a in range(p.d):
            bad = _extremal_case_violations(p, a)
            r.expect(not bad, (p, a, bad))
    return r


def suite_unimodality(qs=(3, 4, 5, 9), d_max: int = 8) -> SuiteResult:
    r = SuiteResult("term unimodality and absolute bound")
    for p in all_params(qs, d_max):
        d, e2 = p.d, p.twice_eps
        for a in range(d):
            for rr in range(1, d + 1):
                lo_s, hi_s = max(a - rr + 1, 0), min(a, d - rr)
                terms = {s: A_term(p, rr, s, a) for s in range(lo_s, hi_s + 1)}
                for s in range(lo_s, hi_s):
                    # compare 2s + eps - a against +-1/2 in doubled units
                    key = 4 * s + e2 - 2 * a
                    if key >= 1:
                        r.expect(terms[s] > terms[s + 1], ("unimodal >", p, rr, s, a))
                    elif key <= -1:
                        r.expect(terms[s] < terms[s + 1], ("unimodal <", p, rr, s, a))
                if terms:
                    r.expect(abs(lam(p, rr, a)) <= max(terms.values()), ("abs bound", p, rr, a))
    return r


def suite_annihilation(max_n: int = 300, cache_dir=None) -> SuiteResult:
    r = SuiteResult("spectral annihilation on graphs")
    for p in small_graph_params(max_n, qs=(2, 3, 4)):
        g = load_graph(p, cache_dir)
        for t in range(p.d + 1):
            rep = verify_spectrum(g, t)
            r.expect(rep.ok, (p, t, rep.witness))
    return r


def suite_explicit(qs=(3, 4, 5, 9), d_max: int = 12) -> SuiteResult:
    r = SuiteResult("explicit estimate >= Hoffman")
    for p in all_params(qs, d_max):
        for t in range(1, p.d):
            r.expect(Fraction(explicit_hoffman(p, t)) >= hoffman_bound(p, t), (p, t))
    return r


def suite_inequalities() -> SuiteResult:
    r = SuiteResult("inequality suite")
    rep = run_suite()
    r.checked = rep.total
    r.failures = list(rep.violations)
    return r


def suite_threshold(d_max: int = 60, qs=(3, 4)) -> SuiteResult:
    r = SuiteResult("threshold obligations")
    for p in all_params(qs, d_max):
        for t in range(0, p.d + 1):
            if not threshold(p, t):
                continue
            r.expect(gap_obligation(p.twice_eps, p.d, t), ("gaps", p, t))
            if t >= 2:
                r.expect(stability_verdict(p, t), ("stability", p, t, b_constants(p, t).total,
                                                   example_size_exact(p, t)))
    return r


def suite_sandwich(max_n: int = 150, cache_dir=None, budget: int = 10 ** 7) -> SuiteResult:
    r = SuiteResult("clique <= LP <= Hoffman")
    for p in small_graph_params(max_n, qs=(2, 3, 4)):
        g = load_graph(p, cache_dir)
        prev = Fraction(0)
        for t in range(p.d + 1):
            res = max_ekr(EKRInstance.of(g, t), budget=budget)
            lp = delsarte_lp(p, t)
            r.expect(lp.status == OPTIMAL and lp.value >= prev, ("lp monotone", p, t))
            prev = lp.value
            if res.optimal:
                r.expect(res.size <= lp.value, ("clique > lp", p, t, res.size, lp.value))
            if 0 < t < p.d:
                r.expect(lp.value <= hoffman_bound(p, t), ("lp > hoffman", p, t))
                if 2 <= t <= p.d - 2:
                    r.expect(y_lower(p, t) <= example_size_exact(p, t), ("y", p, t))
                if res.optimal and p.twice_eps in (0, 2, 4) and t == p.d - 1:
                    r.expect(res.size == hoffman_floor(p, t), ("sharpness", p, t, res.size))
    return r


def suite_structure(max_n: int = 150, cache_dir=None) -> SuiteResult:
    r = SuiteResult("maximal-set structure")
    for p in small_graph_params(max_n):
        g = load_graph(p, cache_dir)
        for t in range(p.d + 1):
            c = check_extension_property(g, t)
            r.expect(c.ok and not c.truncated, ("extension", p, t, c.witness))
        c = check_level_one_structure(g)
        r.expect(c.ok and not c.truncated, ("level one", p, c.witness))
    return r


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "qcore": suite_qcore,
    "graphs": suite_graphs,
    "spectra": suite_spectra,
    "extremal": suite_extremal,
    "unimodality": suite_unimodality,
    "annihilation": suite_annihilation,
    "explicit": suite_explicit,
    "inequalities": suite_inequalities,
    "threshold": suite_threshold,
    "sandwich": suite_sandwich,
    "structure": suite_structure,
}


def run_all(names=None, cache_dir=None) -> list[SuiteResult]:
    out = []
    for name in names or SUITES:
        fn = SUITES[name]
        t0 = time.perf_counter()
        kwargs = {"cache_dir": cache_dir} if "cache_dir" in fn.__code__.co_varnames else {}
        res = fn(**kwargs)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
