"""Exact Erdős-Ko–Rado computations on dual polar graphs."""

from .bounds import (
    BoundReport, b_constants, bound_report, delta_gaps, example_size_exact, explicit_hoffman,
    hoffman_bound, hoffman_floor, stability_verdict, threshold, y_lower,
)
from .cache import load_graph
from .geometry import DualPolarGraph, PolarSpace, build_graph, example_even, example_odd, point_pencil
from .lp import LPProblem, LPResult, delsarte_lp, simplex_solve
from .qcore import Family, PolarParams, gauss, num_generators, omega, count_codim
from .search import EKRInstance, classify_witness, enumerate_maximal, is_ekr, max_ekr
from .spectra import SchemeSpectrum, eigenvalue_P, extremal_eigs, lam, verify_spectrum

__all__ = [
    "BoundReport", "DualPolarGraph", "EKRInstance", "Family", "LPProblem", "LPResult", "PolarParams",
    "PolarSpace", "SchemeSpectrum", "b_constants", "bound_report", "build_graph", "classify_witness",
    "count_codim", "delsarte_lp", "delta_gaps", "eigenvalue_P", "enumerate_maximal", "example_even",
    "example_odd", "example_size_exact", "explicit_hoffman", "extremal_eigs", "gauss", "hoffman_bound",
    "hoffman_floor", "is_ekr", "lam", "load_graph", "max_ekr", "num_generators", "omega", "point_pencil",
    "simplex_solve", "stability_verdict", "threshold", "verify_spectrum", "y_lower",
]
