"""Exact maximum (d,t)-EKR sets on enumerated dual polar graphs.

Vertex sets are Python ints used as bitsets.  ``max_ekr`` is a
branch-and-bound maximum clique search with greedy-colouring bounds; a second
pass recovers the lexicographically least maximum witness, so the reported
witness does not depend on the search order or on the number of workers.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import DualPolarGraph, Subspace, bits_to_int, int_to_bits
from .qcore import omega

DEFAULT_BUDGET = 10 ** 8


class BudgetExhausted(Exception):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass
class EKRInstance:
    """Generators of ``graph`` joined when they meet in codimension at most t."""

    codim: np.ndarray
    t: int
    d: int
    graph: DualPolarGraph | None = None
    nbr: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.t <= self.d:
            raise ValueError(f"t={self.t} outside 0..{self.d}")
        adj = np.asarray(self.codim) <= self.t
        np.fill_diagonal(adj, False)
        self.nbr = [bits_to_int(row) for row in adj]

    @classmethod
    def of(cls, g: DualPolarGraph, t: int) -> "EKRInstance":
        return cls(g.codim, t, g.d, g)

    @property
    def n(self) -> int:
        return len(self.nbr)

    def adjacency(self) -> np.ndarray:
        return np.array([int_to_bits(m, self.n) for m in self.nbr], dtype=bool)

    def permuted(self, perm: Sequence[int]) -> "EKRInstance":
        """Instance whose vertex i is vertex perm[i] of this one."""
        perm = np.asarray(perm)
        return EKRInstance(np.asarray(self.codim)[np.ix_(perm, perm)], self.t, self.d)


def is_ekr(inst: EKRInstance, S: Iterable[int]) -> bool:
    S = sorted(set(S))
    m = _mask(S)
    return all((m & ~(1 << v) & ~inst.nbr[v]) == 0 for v in S)


def extension_vertices(inst: EKRInstance, S: Iterable[int]) -> int:
    """Bitset of vertices outside S adjacent to all of S."""
    cand = (1 << inst.n) - 1
    m = 0
    for v in S:
        cand &= inst.nbr[v]
        m |= 1 << v
    return cand & ~m


# -- maximum clique ---------------------------------------------------------------

@dataclass
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    optimal: bool
    nodes_explored: int
    seconds: float


class _Search:
    """Colour-bounded branch and bound on relabelled vertices (position = rank in the static order)."""

    def __init__(self, nbr: list[int], budget: int):
        self.nbr = nbr
        self.budget = budget
        self.nodes = 0
        self.best: list[int] = []

    def _colour(self, P: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        colour = 0
        nbr = self.nbr
        while P:
            colour += 1
            Q = P
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~nbr[v] & ~low
                P &= ~low
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(self, C: list[int], P: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted
        order, bounds = self._colour(P)
        for i in range(len(order) - 1, -1, -1):
            if len(C) + bounds[i] <= len(self.best):
                return
            v = order[i]
            C.append(v)
            newP = P & self.nbr[v]
            if newP:
                self.expand(C, newP)
            elif len(C) > len(self.best):
                self.best = list(C)
            C.pop()
            P &= ~(1 << v)


def _static_order(inst: EKRInstance) -> list[int]:
    deg = [bin(m).count("1") for m in inst.nbr]
    return sorted(range(inst.n), key=lambda v: (-deg[v], v))


def _relabel(inst: EKRInstance, order: list[int]) -> list[int]:
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        out.append(_mask(pos[u] for u in _bits(inst.nbr[v])))
    return out


def _greedy_clique(nbr: list[int]) -> list[int]:
    C, P = [], (1 << len(nbr)) - 1
    while P:
        v = (P & -P).bit_length() - 1
        C.append(v)
        P &= nbr[v]
    return C


def _run_branches(args) -> tuple[list[int], int, bool]:
    nbr, branches, lower, budget = args
    s = _Search(nbr, budget)
    s.best = list(lower)
    try:
        for v, P in branches:
            if not s.best:
                s.best = [v]
            if P:
                s.expand([v], P)
    except BudgetExhausted:
        return s.best, s.nodes, False
    return s.best, s.nodes, True


def _top_level_branches(nbr: list[int]) -> list[tuple[int, int]]:
    """Independent sub-problems: clique containing v and only vertices after v."""
    n = len(nbr)
    out = []
    for v in range(n):
        later = ((1 << n) - 1) & ~((1 << (v + 1)) - 1)
        out.append((v, nbr[v] & later))
    return out


def max_ekr(inst: EKRInstance, budget: int = DEFAULT_BUDGET, workers: int = 1) -> CliqueResult:
    t0 = time.perf_counter()
    n = inst.n
    if n == 0:
        return CliqueResult(0, (), True, 0, 0.0)
    order = _static_order(inst)
    nbr = _relabel(inst, order)
    lower = _greedy_clique(nbr)
    if workers <= 1:
        s = _Search(nbr, budget)
        s.best = list(lower)
        try:
            s.expand([], (1 << n) - 1)
            complete = True
        except BudgetExhausted:
            complete = False
        best, nodes = s.best, s.nodes
    else:
        branches = _top_level_branches(nbr)
        chunks = [branches[i::workers] for i in range(workers)]
        per_worker = max(1, budget // workers)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_branches, [(nbr, c, lower, per_worker) for c in chunks]))
        best = max((r[0] for r in results), key=len)
        nodes = sum(r[1] for r in results)
        complete = all(r[2] for r in results)
    size = len(best)
    witness = tuple(sorted(order[v] for v in best))
    if complete:
        lex, extra = lex_least_clique(inst, size, budget=max(budget - nodes, 1))
        nodes += extra
        if lex is not None:
            witness = lex
        else:
            complete = False
    return CliqueResult(size, witness, complete, nodes, time.perf_counter() - t0)


def lex_least_clique(inst: EKRInstance, size: int, budget: int = DEFAULT_BUDGET) -> tuple[tuple[int, ...] | None, int]:
    """The lexicographically least clique of the given size in original labels."""
    nbr = inst.nbr
    n = inst.n
    nodes = 0
    if size == 0:
        return (), 0
    helper = _Search(nbr, budget)

    def dfs(C: list[int], P: int) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted
        if len(C) == size:
            return list(C)
        need = size - len(C)
        if bin(P).count("1") < need:
            return None
        _, bounds = helper._colour(P)
        if not bounds or bounds[-1] < need:
            return None
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            if bin(P).count("1") + 1 < need:
                return None
            C.append(v)
            found = dfs(C, P & nbr[v])
            if found is not None:
                return found
            C.pop()
        return None

    try:
        found = dfs([], (1 << n) - 1)
    except BudgetExhausted:
        return None, nodes
    return (tuple(found) if found is not None else None), nodes


# -- maximal cliques -------------------------------------------------------------

@dataclass
class MaximalSets:
    sets: list[tuple[int, ...]]
    truncated: bool


def enumerate_maximal(inst: EKRInstance, cap: int | None = 100_000, max_n: int = 200) -> MaximalSets:
    """All maximal EKR sets by Bron-Kerbosch with Tomita pivoting, in discovery order."""
    if inst.n > max_n:
        raise ValueError(f"n={inst.n} exceeds the maximal-set enumeration limit {max_n}")
    nbr = inst.nbr
    out: list[tuple[int, ...]] = []

    class _Stop(Exception):
        pass

    def bk(R: list[int], P: int, X: int) -> None:
        if not P and not X:
            out.append(tuple(sorted(R)))
            if cap is not None and len(out) >= cap:
                raise _Stop
            return
        PX = P | X
        best_u, best_c = -1, -1
        for u in _bits(PX):
            c = bin(P & nbr[u]).count("1")
            if c > best_c:
                best_u, best_c = u, c
        for v in _bits(P & ~nbr[best_u]):
            R.append(v)
            bk(R, P & nbr[v], X & nbr[v])
            R.pop()
            P &= ~(1 << v)
            X |= 1 << v

    try:
        bk([], (1 << inst.n) - 1, 0)
        truncated = False
    except _Stop:
        truncated = True
    return MaximalSets(out, truncated)


# -- structural checks -----------------------------------------------------------

@dataclass
class StructuralCheck:
    ok: bool
    examined: int
    truncated: bool
    witness: object = None


def check_extension_property(g: DualPolarGraph, t: int, cap: int | None = 100_000) -> StructuralCheck:
    """Every maximal set at level t-1 still extends at level t."""
    if not 0 <= t <= g.d:
        raise ValueError(f"t={t} outside 0..{g.d}")
    if t == 0:
        # the only maximal set at level -1 is empty, and any single generator extends it
        return StructuralCheck(g.n > 0, 1, False)
    lower = enumerate_maximal(EKRInstance.of(g, t - 1), cap=cap)
    upper = EKRInstance.of(g, t)
    for S in lower.sets:
        if extension_vertices(upper, S) == 0:
            return StructuralCheck(False, len(lower.sets), lower.truncated, S)
    return StructuralCheck(True, len(lower.sets), lower.truncated)


def intersection_mask(g: DualPolarGraph, S: Iterable[int]) -> int:
    """Singular-point mask of the intersection of the generators in S."""
    inc = g.incidence
    S = list(S)
    if not S:
        raise ValueError("empty set has no intersection")
    common = np.logical_and.reduce(inc[S], axis=0)
    return bits_to_int(common)


def mask_subspace(g: DualPolarGraph, mask: int) -> Subspace:
    sp = g.space
    idx = _bits(mask)
    if not idx:
        return Subspace((), sp.m, g.params.q)
    return Subspace.span(sp.singular[idx], g.params.q, sp.m)


def _pencil_of_mask(g: DualPolarGraph, mask: int) -> frozenset[int]:
    need = bin(mask).count("1")
    cover = g.incidence[:, int_to_bits(mask, g.space.num_singular)].sum(axis=1)
    return frozenset(np.nonzero(cover == need)[0].tolist())


def check_level_one_structure(g: DualPolarGraph, cap: int | None = 100_000) -> StructuralCheck:
    """Every maximum set at level 1 is the pencil of a (d-1)-space."""
    if g.d < 1:
        return StructuralCheck(True, 0, False)
    res = enumerate_maximal(EKRInstance.of(g, 1), cap=cap)
    top = max(len(S) for S in res.sets)
    maxima = [S for S in res.sets if len(S) == top]
    expected = omega(g.params, 1)
    if top != expected:
        return StructuralCheck(False, len(maxima), res.truncated, ("size", top, expected))
    for S in maxima:
        mask = intersection_mask(g, S)
        U = mask_subspace(g, mask)
        if U.dim != g.d - 1 or _pencil_of_mask(g, mask) != frozenset(S):
            return StructuralCheck(False, len(maxima), res.truncated, S)
    return StructuralCheck(True, len(maxima), res.truncated)


# -- witness classification --------------------------------------------------------

PENCIL, EVEN, ODD, HYPERBOLIC, OTHER = "pencil", "even-example", "odd-example", "hyperbolic-special", "other"


@dataclass
class Classification:
    tag: str
    detail: dict = field(default_factory=dict)
    inferred: bool = False


def classify_witness(inst: EKRInstance, S: Iterable[int]) -> Classification:
    g = inst.graph
    if g is None:
        raise ValueError("classification needs the underlying graph")
    S = frozenset(S)
    if not S:
        return Classification(OTHER)
    d, t = g.d, inst.t
    members = sorted(S)
    mask = intersection_mask(g, members)
    k = mask_subspace(g, mask).dim
    if k == d - t and _pencil_of_mask(g, mask) == S:
        return Classification(PENCIL, {"dim": k})
    if t % 2 == 0:
        for v in members:
            if frozenset(np.nonzero(g.codim[v] <= t // 2)[0].tolist()) == S:
                return Classification(EVEN, {"centre": v})
    else:
        seen = set()
        sub = g.codim[np.ix_(members, members)]
        for a, b in zip(*np.nonzero(np.triu(sub == 1))):
            u_mask = intersection_mask(g, (members[a], members[b]))
            if u_mask in seen:
                continue
            seen.add(u_mask)
            if not _pencil_of_mask(g, u_mask) <= S:
                continue
            U = mask_subspace(g, u_mask)
            dims = g.meet_dims(U)
            if frozenset(np.nonzero(dims >= d - (t + 1) // 2)[0].tolist()) == S:
                return Classification(ODD, {"U_points": bin(u_mask).count("1")})
    if g.params.twice_eps == 0 and 2 * len(S) == g.n:
        sub = g.codim[np.ix_(members, members)]
        if np.all(sub % 2 == 0):
            return Classification(HYPERBOLIC, {"size": len(S)}, inferred=True)
    return Classification(OTHER, {"intersection_dim": k})


def maximal_extension_free(inst: EKRInstance, S: Iterable[int]) -> bool:
    """Whether S is an EKR set that no vertex can extend."""
    S = list(S)
    return is_ekr(inst, S) and extension_vertices(inst, S) == 0


def search_summary(inst: EKRInstance, res: CliqueResult) -> dict:
    cls = classify_witness(inst, res.witness) if inst.graph is not None and res.witness else None
    return {
        "size": res.size,
        "optimal": res.optimal,
        "witness": list(res.witness),
        "nodes": res.nodes_explored,
        "seconds": round(res.seconds, 3),
        "classification": None if cls is None else {"tag": cls.tag, "inferred": cls.inferred,
                                                   **{k: v for k, v in cls.detail.items()}},
    }
