"""Concrete polar spaces over small fields and their dual polar graphs.

The standard forms are the ones listed for the six families: hyperbolic,
parabolic and elliptic quadrics, the two Hermitian spaces and the symplectic
space.  Generators are found by breadth-first extension of totally isotropic
subspaces; every subspace met during the search is identified by the bitmask
of singular points it contains, which is a canonical key for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .field import FieldSpec, make_field
from .qcore import Family, PolarParams, count_codim, num_generators

DEFAULT_CAP = 5000


class EnumerationCapError(RuntimeError):
    """Raised when a space has more generators than the enumeration cap."""

    def __init__(self, params: PolarParams, expected: int, cap: int):
        self.params = params
        self.expected = expected
        self.cap = cap
        super().__init__(
            f"{params.label()} has {expected} generators, above the enumeration cap {cap}"
        )


@dataclass(frozen=True)
class FormSpec:
    """A form on F_q^m given by its monomial terms.

    ``terms`` holds triples ``(i, j, c)``.  For a quadratic form the term is
    ``c*x_i*x_j`` with ``i <= j``; for the alternating and Hermitian kinds it
    is ``c*x_i*y_j`` (``y_j`` conjugated in the Hermitian case).
    """

    kind: str  # "quadratic" | "alternating" | "hermitian"
    ambient_dim: int
    q: int
    terms: tuple[tuple[int, int, int], ...]

    @property
    def field(self) -> FieldSpec:
        return make_field(self.q)

    def bilinear_terms(self) -> list[tuple[int, int, int]]:
        """Terms of the (polarized, for quadrics) sesquilinear form."""
        if self.kind != "quadratic":
            return list(self.terms)
        F = self.field
        out = []
        for i, j, c in self.terms:
            if i == j:
                c2 = int(F.add[c, c])
                if c2:
                    out.append((i, i, c2))
            else:
                out.append((i, j, c))
                out.append((j, i, c))
        return out

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """Value on each row: f(x) for quadrics, B(x, x) otherwise."""
        X = np.atleast_2d(np.asarray(X, dtype=np.uint8))
        if self.kind != "quadratic":
            return self._diag(X)
        F = self.field
        out = np.zeros(len(X), dtype=np.uint8)
        for i, j, c in self.terms:
            out = F.add[out, F.mul[c, F.mul[X[:, i], X[:, j]]]]
        return out

    def _diag(self, X: np.ndarray) -> np.ndarray:
        F = self.field
        Y = F.conj[X] if self.kind == "hermitian" else X
        out = np.zeros(len(X), dtype=np.uint8)
        for i, j, c in self.bilinear_terms():
            out = F.add[out, F.mul[F.mul[c, X[:, i]], Y[:, j]]]
        return out

    def pair_matrix(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Matrix of B(x, y) over all row pairs (polarization for quadrics)."""
        F = self.field
        X = np.atleast_2d(np.asarray(X, dtype=np.uint8))
        Y = np.atleast_2d(np.asarray(Y, dtype=np.uint8))
        if self.kind == "hermitian":
            Y = F.conj[Y]
        out = np.zeros((len(X), len(Y)), dtype=np.uint8)
        for i, j, c in self.bilinear_terms():
            out = F.add[out, F.mul[F.mul[c, X[:, i]][:, None], Y[None, :, j]]]
        return out


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_q^m stored by its reduced row echelon basis."""

    basis: tuple[tuple[int, ...], ...]
    ambient_dim: int
    q: int = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_array(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.ambient_dim), dtype=np.uint8)
        return np.array(self.basis, dtype=np.uint8)

    @classmethod
    def span(cls, vectors, q: int, ambient_dim: int | None = None) -> "Subspace":
        rows = [tuple(int(x) for x in v) for v in vectors]
        if ambient_dim is None:
            if not rows:
                raise ValueError("ambient_dim is needed for the zero subspace")
            ambient_dim = len(rows[0])
        return cls(tuple(rref(rows, q)), ambient_dim, q)


def rref(rows, q: int) -> list[tuple[int, ...]]:
    """Reduced row echelon form over GF(q), zero rows dropped."""
    F = make_field(q)
    add, mul, neg, inv = (t.tolist() for t in (F.add, F.mul, F.neg, F.inv))
    M = [list(r) for r in rows]
    if not M:
        return []
    ncols = len(M[0])
    pivot_row = 0
    for col in range(ncols):
        sel = next((i for i in range(pivot_row, len(M)) if M[i][col]), None)
        if sel is None:
            continue
        M[pivot_row], M[sel] = M[sel], M[pivot_row]
        s = inv[M[pivot_row][col]]
        M[pivot_row] = [mul[s][x] for x in M[pivot_row]]
        prow = M[pivot_row]
        for i in range(len(M)):
            if i != pivot_row and M[i][col]:
                f = neg[M[i][col]]
                M[i] = [add[a][mul[f][b]] for a, b in zip(M[i], prow)]
        pivot_row += 1
        if pivot_row == len(M):
            break
    return [tuple(r) for r in M[:pivot_row]]


def rank(rows, q: int) -> int:
    return len(rref(rows, q))


def intersection_dim(a: Subspace, b: Subspace) -> int:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    return a.dim + b.dim - rank(list(a.basis) + list(b.basis), a.q)


# -- standard forms -------------------------------------------------------------

def _elliptic_constant(F: FieldSpec) -> int:
    """Least c with x^2 + x*y + c*y^2 irreducible over F."""
    for c in range(1, F.q):
        if not any(F.add[F.add[F.mul[x, x], x], c] == 0 for x in range(F.q)):
            return c
    raise AssertionError(f"no irreducible quadratic found over GF({F.q})")


def standard_form(p: PolarParams) -> FormSpec:
    F = make_field(p.q)
    d, fam = p.d, p.family
    if fam.hermitian and F.deg != 2:
        raise ValueError(f"Hermitian spaces need a quadratic extension field, got q={p.q}")
    one = 1
    if fam is Family.QPLUS:
        terms = [(2 * i, 2 * i + 1, one) for i in range(d)]
        return FormSpec("quadratic", 2 * d, p.q, tuple(terms))
    if fam is Family.Q:
        terms = [(0, 0, one)] + [(2 * i + 1, 2 * i + 2, one) for i in range(d)]
        return FormSpec("quadratic", 2 * d + 1, p.q, tuple(terms))
    if fam is Family.QMINUS:
        c = _elliptic_constant(F)
        terms = [(0, 0, one), (0, 1, one), (1, 1, c)]
        terms += [(2 * i + 2, 2 * i + 3, one) for i in range(d)]
        return FormSpec("quadratic", 2 * d + 2, p.q, tuple(terms))
    if fam is Family.W:
        minus_one = int(F.neg[1])
        terms = []
        for i in range(d):
            terms += [(2 * i, 2 * i + 1, one), (2 * i + 1, 2 * i, minus_one)]
        return FormSpec("alternating", 2 * d, p.q, tuple(terms))
    m = 2 * d if fam is Family.HODD else 2 * d + 1
    return FormSpec("hermitian", m, p.q, tuple((i, i, one) for i in range(m)))


def is_totally_isotropic(S: Subspace, f: FormSpec) -> bool:
    if S.ambient_dim != f.ambient_dim:
        raise ValueError(f"subspace lives in dimension {S.ambient_dim}, form in {f.ambient_dim}")
    if S.dim == 0:
        return True
    B = S.as_array()
    if f.kind == "quadratic" and np.any(f.evaluate(B)):
        return False
    return not np.any(f.pair_matrix(B, B))


# -- the polar space as a point set ---------------------------------------------

class PolarSpace:
    """Projective points of F_q^m together with the singular ones and their perps."""

    def __init__(self, params: PolarParams):
        self.params = params
        self.form = standard_form(params)
        self.field = make_field(params.q)
        q, m = params.q, self.form.ambient_dim
        self.q, self.m = q, m
        self._powers = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
        allv = np.indices((q,) * m).reshape(m, -1).T.astype(np.uint8)
        normalized = self.normalize(allv)
        is_point = np.any(allv != 0, axis=1) & np.all(normalized == allv, axis=1)
        points = allv[is_point]
        singular = points[self.form.evaluate(points) == 0]
        self.singular = singular
        self.singular_index = np.full(q ** m, -1, dtype=np.int64)
        self.singular_index[self.encode(singular)] = np.arange(len(singular))
        perp = self.form.pair_matrix(singular, singular) == 0
        self.perp_masks = [bits_to_int(row) for row in perp]

    @property
    def num_singular(self) -> int:
        return len(self.singular)

    def encode(self, V: np.ndarray) -> np.ndarray:
        return np.asarray(V, dtype=np.int64) @ self._powers

    def normalize(self, V: np.ndarray) -> np.ndarray:
        """Scale each row so that its first nonzero entry is 1 (zero rows stay zero)."""
        V = np.atleast_2d(np.asarray(V, dtype=np.uint8))
        first = np.argmax(V != 0, axis=1)
        lead = V[np.arange(len(V)), first]
        return self.field.mul[self.field.inv[lead][:, None], V]

    def point_indices(self, V: np.ndarray) -> np.ndarray:
        """Singular-point indices of the nonzero rows of V (-1 if not singular)."""
        V = np.atleast_2d(np.asarray(V, dtype=np.uint8))
        V = V[np.any(V != 0, axis=1)]
        return self.singular_index[self.encode(self.normalize(V))]

    def span_vectors(self, basis: np.ndarray) -> np.ndarray:
        """All q^k vectors of the span of the rows of ``basis``."""
        F = self.field
        vecs = np.zeros((1, self.m), dtype=np.uint8)
        for row in np.atleast_2d(basis):
            scaled = F.mul[np.arange(self.q, dtype=np.uint8)[:, None], row[None, :]]
            vecs = F.add[vecs[:, None, :], scaled[None, :, :]].reshape(-1, self.m)
        return vecs

    def point_mask(self, S: Subspace) -> int:
        """Bitmask of the singular points lying in S (all points, if S is totally isotropic)."""
        if S.dim == 0:
            return 0
        idx = self.point_indices(self.span_vectors(S.as_array()))
        return indices_to_int(idx[idx >= 0])

    def enumerate_generators(self) -> list[tuple[Subspace, int]]:
        """All generators, each with its singular-point mask, sorted by basis."""
        level = {}
        for i in range(self.num_singular):
            vecs = self.span_vectors(self.singular[i:i + 1])
            level[1 << i] = ([i], vecs)
        F = self.field
        scalars = np.arange(1, self.q, dtype=np.uint8)
        for _ in range(self.params.d - 1):
            nxt = {}
            for mask, (basis, vecs) in level.items():
                perp = -1
                for b in basis:
                    perp &= self.perp_masks[b]
                cand = perp & ~mask
                while cand:
                    low = cand & -cand
                    c = low.bit_length() - 1
                    shifted = F.mul[scalars[:, None], self.singular[c][None, :]]
                    extra = F.add[vecs[None, :, :], shifted[:, None, :]].reshape(-1, self.m)
                    idx = self.point_indices(extra)
                    if np.any(idx < 0):
                        raise AssertionError("extension left the quadric; form data is inconsistent")
                    new_mask = mask | indices_to_int(idx)
                    cand &= ~new_mask
                    if new_mask not in nxt:
                        nxt[new_mask] = (basis + [c], np.concatenate([vecs, extra]))
            level = nxt
        gens = []
        for mask, (basis, _) in level.items():
            gens.append((Subspace.span(self.singular[basis], self.q, self.m), mask))
        gens.sort(key=lambda item: item[0].basis)
        return gens


def bits_to_int(bits: np.ndarray) -> int:
    packed = np.packbits(np.asarray(bits, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def indices_to_int(idx) -> int:
    value = 0
    for i in set(int(x) for x in idx):
        value |= 1 << i
    return value


def int_to_bits(value: int, length: int) -> np.ndarray:
    raw = value.to_bytes((length + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length].astype(bool)


def _dim_lookup(q: int, max_dim: int) -> dict[int, int]:
    return {(q ** k - 1) // (q - 1): k for k in range(max_dim + 1)}


def enumerate_generators(p: PolarParams, cap: int = DEFAULT_CAP) -> list[Subspace]:
    expected = num_generators(p)
    if expected > cap:
        raise EnumerationCapError(p, expected, cap)
    return [s for s, _ in PolarSpace(p).enumerate_generators()]


# -- dual polar graph -----------------------------------------------------------

class DualPolarGraph:
    """Generators of a polar space with the matrix of intersection codimensions."""

    def __init__(self, params: PolarParams, vertices: list[Subspace], codim: np.ndarray,
                 space: PolarSpace | None = None, incidence: np.ndarray | None = None):
        self.params = params
        self.vertices = list(vertices)
        self.codim = np.asarray(codim, dtype=np.uint8)
        self.codim.setflags(write=False)
        self._space = space
        self._incidence = incidence

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def space(self) -> PolarSpace:
        if self._space is None:
            self._space = PolarSpace(self.params)
        return self._space

    @property
    def incidence(self) -> np.ndarray:
        """Boolean matrix (generators x singular points)."""
        if self._incidence is None:
            sp = self.space
            rows = [int_to_bits(sp.point_mask(v), sp.num_singular) for v in self.vertices]
            self._incidence = np.array(rows, dtype=bool)
        return self._incidence

    @cached_property
    def _dims(self) -> dict[int, int]:
        return _dim_lookup(self.params.q, self.space.m)

    def adjacency(self, s: int) -> np.ndarray:
        return (self.codim == s).astype(np.int64)

    def meet_dims(self, S: Subspace) -> np.ndarray:
        """dim(v ∩ S) for every vertex v (S totally isotropic)."""
        sp = self.space
        if S.dim == 0:
            return np.zeros(self.n, dtype=np.int64)
        mask = int_to_bits(sp.point_mask(S), sp.num_singular)
        counts = self.incidence.astype(np.float32) @ mask.astype(np.float32)
        lookup = self._dims
        return np.array([lookup[int(round(c))] for c in counts], dtype=np.int64)

    def profile(self, v: int) -> list[int]:
        return np.bincount(self.codim[v], minlength=self.d + 1).tolist()

    def index_of(self, S: Subspace) -> int:
        lo, hi = 0, self.n
        while lo < hi:
            mid = (lo + hi) // 2
            if self.vertices[mid].basis < S.basis:
                lo = mid + 1
            else:
                hi = mid
        if lo < self.n and self.vertices[lo].basis == S.basis:
            return lo
        raise KeyError("subspace is not a generator of this graph")

    def __repr__(self) -> str:
        return f"DualPolarGraph({self.params.label()}, n={self.n})"


def build_graph(p: PolarParams, cap: int = DEFAULT_CAP) -> DualPolarGraph:
    expected = num_generators(p)
    if expected > cap:
        raise EnumerationCapError(p, expected, cap)
    sp = PolarSpace(p)
    gens = sp.enumerate_generators()
    if len(gens) != expected:
        raise AssertionError(f"enumerated {len(gens)} generators, formula says {expected}")
    inc = np.array([int_to_bits(mask, sp.num_singular) for _, mask in gens], dtype=bool)
    codim = codim_from_incidence(inc, p.q, p.d)
    return DualPolarGraph(p, [s for s, _ in gens], codim, space=sp, incidence=inc)


def codim_from_incidence(inc: np.ndarray, q: int, d: int) -> np.ndarray:
    counts = inc.astype(np.float32) @ inc.T.astype(np.float32)
    counts = np.rint(counts).astype(np.int64)
    lut = np.full(counts.max() + 1, 255, dtype=np.int64)
    for k in range(d + 1):
        lut[(q ** k - 1) // (q - 1)] = d - k
    codim = lut[counts]
    if np.any(codim == 255):
        raise AssertionError("intersection of two generators has a non-subspace point count")
    return codim.astype(np.uint8)


def codim_profile_matches(g: DualPolarGraph) -> bool:
    """Every vertex sees count_codim(p, s) vertices at codimension s."""
    expected = [count_codim(g.params, s) for s in range(g.d + 1)]
    counts = np.stack([np.sum(g.codim == s, axis=1) for s in range(g.d + 1)], axis=1)
    return bool(np.all(counts == np.array(expected)[None, :]))


# -- the examples ---------------------------------------------------------------

def _check_ti(g: DualPolarGraph, S: Subspace) -> None:
    if not is_totally_isotropic(S, g.space.form):
        raise ValueError("subspace is not totally isotropic")


def example_even(g: DualPolarGraph, G0: int, t: int) -> frozenset[int]:
    """Generators meeting generator G0 in dimension at least d - t/2."""
    if t % 2 or not 0 <= t <= g.d:
        raise ValueError(f"t={t} must be even with 0 <= t <= d")
    return frozenset(np.nonzero(g.codim[G0] <= t // 2)[0].tolist())


def example_odd(g: DualPolarGraph, U: Subspace, t: int) -> frozenset[int]:
    """Generators meeting the (d-1)-space U in dimension at least d - (t+1)/2."""
    if t % 2 == 0 or not 0 < t <= g.d:
        raise ValueError(f"t={t} must be odd with 0 < t <= d")
    if U.dim != g.d - 1:
        raise ValueError(f"U must have dimension d-1={g.d - 1}, got {U.dim}")
    _check_ti(g, U)
    dims = g.meet_dims(U)
    return frozenset(np.nonzero(dims >= g.d - (t + 1) // 2)[0].tolist())


def point_pencil(g: DualPolarGraph, S: Subspace) -> frozenset[int]:
    """All generators containing the totally isotropic subspace S."""
    _check_ti(g, S)
    dims = g.meet_dims(S)
    return frozenset(np.nonzero(dims == S.dim)[0].tolist())


def subspace_meet(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b via the null space of the stacked bases."""
    A, B = a.as_array(), b.as_array()
    if a.dim == 0 or b.dim == 0:
        return Subspace((), a.ambient_dim, a.q)
    F = make_field(a.q)
    # x*A = y*B  <=>  [x | y] * [[A], [-B]] = 0
    stacked = np.concatenate([A, F.neg[B]]).T
    kernel = null_space(stacked, a.q)
    vecs = []
    for row in kernel:
        x = row[: a.dim]
        v = np.zeros(a.ambient_dim, dtype=np.uint8)
        for coef, arow in zip(x, A):
            v = F.add[v, F.mul[coef, arow]]
        vecs.append(v)
    return Subspace.span(vecs, a.q, a.ambient_dim) if vecs else Subspace((), a.ambient_dim, a.q)


def null_space(M: np.ndarray, q: int) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0} over GF(q)."""
    F = make_field(q)
    R = rref(np.asarray(M).tolist(), q)
    ncols = np.asarray(M).shape[1]
    pivots = [next(j for j, x in enumerate(r) if x) for r in R]
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = np.zeros(ncols, dtype=np.uint8)
        x[f] = 1
        for r, pc in zip(R, pivots):
            x[pc] = F.neg[r[f]]
        basis.append(x)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), ncols)
