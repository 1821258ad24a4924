"""F_q-subspaces of F_{q^n}^{d+1} and the linear sets they define.

A vector of F_{q^n}^{d+1} is a tuple of field codes.  Expanding each
coordinate into its N digits over the prime field (N the top degree of the
tower) turns an F_q-subspace U into an F_p-subspace of F_p^{(d+1)N}; its
reduced row echelon form is the canonical form, so two subspaces are equal
iff their matrices are identical.  The F_q-dimension is the F_p-dimension
divided by e, where q = p^e.

The weight of a point ⟨v⟩ is dim_{F_q}{α ∈ F_{q^n} : αv ∈ U}.  The map
α ↦ αv is F_p-linear, so the weight is read off the rank of an
(H·(x^j v))_j matrix, H a parity check of U; nothing is enumerated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gfp
from .errors import EnumerationCapExceeded, TheoremViolation, InternalInconsistency
from .fields import ENUMERATION_CAP, FieldTower

ProjPoint = tuple  # normalized representative: first nonzero coordinate is 1


def fp_basis(tower: FieldTower) -> list[int]:
    """1, x, ..., x^{N-1}: the F_p-basis behind the digit expansion."""
    if tower.N == 1:
        return [1]
    return [tower.pow(tower.x, j) for j in range(tower.N)]


def vec_digits(tower: FieldTower, vectors) -> np.ndarray:
    """(..., d+1) code array → (..., (d+1)N) digit array."""
    V = np.asarray(vectors, dtype=np.int64)
    D = tower.digits(V)
    return D.reshape(V.shape[:-1] + (V.shape[-1] * tower.N,))


def digits_to_vec(tower: FieldTower, D) -> np.ndarray:
    D = np.asarray(D, dtype=np.int64)
    return tower.codes(D.reshape(D.shape[:-1] + (-1, tower.N)))


def normalize_rows(tower: FieldTower, V: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero coordinate is 1."""
    V = np.asarray(V, dtype=np.int64)
    nz = V != 0
    if not nz.any(axis=1).all():
        raise ValueError("zero vector has no projective point")
    first = nz.argmax(axis=1)
    lead = V[np.arange(V.shape[0]), first]
    return tower.vmul(V, tower.vinv(lead)[:, None])


def normalize_point(tower: FieldTower, v: Sequence[int]) -> ProjPoint:
    return tuple(int(a) for a in normalize_rows(tower, np.array([v]))[0])


class FqSubspace:
    """An F_q-subspace U of F_{q^n}^{d+1}.

    ``base_degree`` is e with q = p^e; n = N/e where N is the tower's top
    degree.  Construct through :func:`span_fq` or :meth:`from_fp_rows`.
    """

    def __init__(self, tower: FieldTower, base_degree: int, d: int, fp_rows: np.ndarray):
        tower._check_degree(base_degree)
        self.tower = tower
        self.e = base_degree
        self.d = d
        width = (d + 1) * tower.N
        R, piv = gfp.rref(np.asarray(fp_rows, dtype=np.int64).reshape(-1, width), tower.p)
        if R.shape[0] % base_degree:
            raise ValueError("rows do not span an F_q-subspace")
        self.rows = R
        self.pivots = piv
        self.k = R.shape[0] // base_degree
        if self.k == 0:
            raise ValueError("the zero subspace does not define a linear set")
        self._gens: list[tuple[int, ...]] | None = None
        self._H: np.ndarray | None = None

    from_fp_rows = classmethod(lambda cls, tower, e, d, rows: cls(tower, e, d, rows))

    @property
    def q(self) -> int:
        return self.tower.p**self.e

    @property
    def n(self) -> int:
        return self.tower.N // self.e

    @property
    def rank(self) -> int:
        return self.k

    @property
    def parity_check(self) -> np.ndarray:
        if self._H is None:
            self._H = gfp.nullspace(self.rows, self.tower.p)
        return self._H

    @property
    def generators(self) -> list[tuple[int, ...]]:
        """An F_q-basis of U: greedy subset of the echelon rows, in row order."""
        if self._gens is None:
            T, p = self.tower, self.tower.p
            scal = T.subfield_basis(self.e)
            acc = np.zeros((0, self.rows.shape[1]), dtype=np.int64)
            piv: list[int] = []
            gens = []
            for row in self.rows:
                if gfp.row_space_contains(acc, piv, row, p):
                    continue
                v = digits_to_vec(T, row)
                gens.append(tuple(int(a) for a in v))
                extra = vec_digits(T, T.vmul(v[None, :], np.array(scal)[:, None]))
                acc, piv = gfp.rref(np.vstack([acc, extra]), p)
            if len(gens) != self.k:
                raise InternalInconsistency("generator extraction lost dimension")
            self._gens = gens
        return self._gens

    def contains(self, v: Sequence[int]) -> bool:
        return gfp.row_space_contains(self.rows, self.pivots, vec_digits(self.tower, v), self.tower.p)

    def __eq__(self, other):
        return (
            isinstance(other, FqSubspace)
            and (self.tower, self.e, self.d) == (other.tower, other.e, other.d)
            and np.array_equal(self.rows, other.rows)
        )

    def __hash__(self):
        return hash((self.tower, self.e, self.d, self.rows.tobytes()))

    def __repr__(self):
        return f"FqSubspace(q={self.q}, n={self.n}, d={self.d}, k={self.k})"

    # serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        T = self.tower
        return {
            "tower": T.to_json(),
            "base_degree": self.e,
            "ambient_dim": self.d,
            "basis": [[T.digits_of(a) for a in g] for g in self.generators],
        }

    @classmethod
    def from_json(cls, record: dict, *, allow_large: bool = False) -> "FqSubspace":
        T = FieldTower.from_json(record["tower"], allow_large=allow_large)
        d = int(record["ambient_dim"])
        vecs = []
        for g in record["basis"]:
            if len(g) != d + 1:
                raise ValueError("basis vector has the wrong number of coordinates")
            vecs.append([T.from_digits(c) for c in g])
        return span_fq(T, vecs, int(record["base_degree"]))


def span_fq(tower: FieldTower, vectors: Iterable[Sequence[int]], base_degree: int = 1) -> FqSubspace:
    """F_q-span of ``vectors`` (codes), q = p^base_degree."""
    V = np.array([list(v) for v in vectors], dtype=np.int64)
    if V.size == 0 or not V.any():
        raise ValueError("need at least one nonzero vector")
    scal = np.array(tower.subfield_basis(base_degree), dtype=np.int64)
    W = tower.vmul(V[:, None, :], scal[None, :, None]).reshape(-1, V.shape[1])
    return FqSubspace(tower, base_degree, V.shape[1] - 1, vec_digits(tower, W))


# ----------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------
def _check_cap(U: FqSubspace, cap: int | None) -> None:
    cap = ENUMERATION_CAP if cap is None else cap
    if U.q**U.k > cap:
        raise EnumerationCapExceeded(f"q^k = {U.q}^{U.k} exceeds the enumeration cap {cap}")


def representatives(U: FqSubspace, cap: int | None = None) -> np.ndarray:
    """The (q^k-1)/(q-1) vectors Σ c_i u_i whose first nonzero c_i is 1."""
    _check_cap(U, cap)
    T = U.tower
    G = np.array(U.generators, dtype=np.int64)
    K = T.subfield_elements(U.e)
    width = U.d + 1
    suffix = np.zeros((1, width), dtype=np.int64)  # span of u_{i+1..k-1}
    blocks = []
    for i in range(U.k - 1, -1, -1):
        blocks.append(T.vadd(suffix, G[i][None, :]))
        scaled = T.vmul(K[:, None], G[i][None, :])  # (q, width)
        suffix = T.vadd(scaled[:, None, :], suffix[None, :, :]).reshape(-1, width)
    return np.vstack(blocks[::-1])


def _points_and_hits(U: FqSubspace, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    reps = normalize_rows(U.tower, representatives(U, cap))
    pts, counts = np.unique(reps, axis=0, return_counts=True)
    return pts, counts


def enumerate_points(U: FqSubspace, cap: int | None = None) -> np.ndarray:
    """Points of L_U as a (size, d+1) array of normalized codes, sorted lexicographically."""
    return _points_and_hits(U, cap)[0]


# ----------------------------------------------------------------------
# weights
# ----------------------------------------------------------------------
def point_weights(U: FqSubspace, points) -> np.ndarray:
    """Weights of a batch of points (rows of codes), by linear solving."""
    T = U.tower
    P = np.atleast_2d(np.asarray(points, dtype=np.int64))
    if P.shape[1] != U.d + 1:
        raise ValueError("point lives in a different ambient space")
    H = U.parity_check
    if H.shape[0] == 0:
        return np.full(P.shape[0], T.N // U.e, dtype=np.int64)
    out = np.empty(P.shape[0], dtype=np.int64)
    basis = fp_basis(T)
    Hf = H.T.astype(np.float64)  # BLAS matmul; sums stay far below 2^53
    chunk = max(1, 40_000_000 // (H.shape[0] * T.N * (U.d + 1) * T.N))
    for s in range(0, P.shape[0], chunk):
        block = P[s:s + chunk]
        A = np.empty((block.shape[0], H.shape[0], T.N), dtype=np.int64)
        for j, xj in enumerate(basis):
            D = vec_digits(T, T.vmul(block, xj))
            A[:, :, j] = (D.astype(np.float64) @ Hf).astype(np.int64) % T.p
        ker = T.N - gfp.batched_rank(A, T.p)
        if (ker % U.e).any():
            raise InternalInconsistency("kernel of αv ∈ U is not an F_q-space")
        out[s:s + chunk] = ker // U.e
    return out


def subspace_weight(U: FqSubspace, W_basis) -> int:
    """dim_{F_q}(U ∩ W) for W given by an F_{q^n}-basis (rows of codes)."""
    T = U.tower
    Wb = np.atleast_2d(np.asarray(W_basis, dtype=np.int64))
    if Wb.shape[1] != U.d + 1:
        raise ValueError("subspace lives in a different ambient space")
    rows = np.vstack([vec_digits(T, T.vmul(Wb, xj)) for xj in fp_basis(T)])
    dim = gfp.intersection_dim(U.rows, rows, T.p)
    if dim % U.e:
        raise InternalInconsistency("U ∩ W is not an F_q-space")
    return dim // U.e


def weight(U: FqSubspace, T) -> int:
    """Weight of a point (sequence of codes) or a subspace (object with ``basis``)."""
    if hasattr(T, "basis"):
        return subspace_weight(U, T.basis)
    v = np.asarray(T, dtype=np.int64)
    if not v.any():
        raise ValueError("zero vector")
    return int(point_weights(U, v[None, :])[0])


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------
@dataclass
class LinearSetReport:
    q: int
    n: int
    d: int
    rank: int
    points: np.ndarray
    weights: np.ndarray
    N: list[int]
    spectrum: list[int]
    identities: dict[str, bool] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def weight_of(self, point) -> int:
        idx = np.flatnonzero((self.points == np.asarray(point)).all(axis=1))
        return int(self.weights[idx[0]]) if idx.size else 0

    def points_of_weight(self, w: int) -> np.ndarray:
        return self.points[self.weights == w]

    def summary(self) -> tuple:
        """Everything except the point list, for cheap comparison."""
        return (self.q, self.n, self.d, self.rank, self.size, tuple(self.N), tuple(self.spectrum))

    def same_as(self, other: "LinearSetReport") -> bool:
        return (
            self.summary() == other.summary()
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )

    def to_json(self, with_points: bool = False) -> dict:
        out = {
            "size": self.size,
            "rank": self.rank,
            "N": list(self.N),
            "spectrum": list(self.spectrum),
            "identities": dict(self.identities),
        }
        if with_points:
            out["points"] = self.points.tolist()
            out["weights"] = self.weights.tolist()
        return out


def check_identities(q: int, k: int, size: int, N: Sequence[int]) -> dict[str, bool]:
    ids = {
        "(1) sum N_i = size": sum(N) == size,
        "(2) sum N_i (q^i-1)/(q-1) = (q^k-1)/(q-1)": sum(
            Ni * (q**i - 1) // (q - 1) for i, Ni in enumerate(N, start=1)
        ) == (q**k - 1) // (q - 1),
        "(3) size <= (q^k-1)/(q-1)": size <= (q**k - 1) // (q - 1),
        "(4) size = 1 mod q": size % q == 1,
    }
    return ids


def build_report(q, n, d, k, points, weights) -> LinearSetReport:
    N = [int((weights == i).sum()) for i in range(1, n + 1)]
    if int((weights < 1).sum()) or int((weights > n).sum()):
        raise InternalInconsistency("a point of L_U has weight outside 1..n")
    spectrum = [i for i in range(1, n + 1) if N[i - 1]]
    ids = check_identities(q, k, points.shape[0], N)
    return LinearSetReport(q, n, d, k, points, weights, N, spectrum, ids)


def report(U: FqSubspace, cap: int | None = None) -> LinearSetReport:
    """Enumerate L_U, weigh every point and check the four identities.

    Identities (1) and (2) failing is a bug and raises.  As a free cross-check
    a point of weight w must be hit by exactly (q^w-1)/(q-1) representatives.
    """
    pts, hits = _points_and_hits(U, cap)
    w = point_weights(U, pts)
    q = U.q
    if not np.array_equal(hits * (q - 1) + 1, q**w):
        raise InternalInconsistency("representative multiplicities disagree with solved weights")
    rep = build_report(q, U.n, U.d, U.k, pts, w)
    bad = [name for name in list(rep.identities)[:2] if not rep.identities[name]]
    if bad:
        raise TheoremViolation(f"weight distribution identities failed: {bad}")
    return rep


# ----------------------------------------------------------------------
# linearity
# ----------------------------------------------------------------------
def is_closed_under(U: FqSubspace, degree: int) -> bool:
    """Is U closed under multiplication by F_{p^degree}?"""
    T = U.tower
    g = T.subfield_primitive(degree)
    V = T.vmul(np.array(U.generators, dtype=np.int64), g)
    return all(U.contains(v) for v in V)


def max_field_of_linearity(U: FqSubspace) -> int:
    """Largest s | n such that U is an F_{q^s}-subspace."""
    best = 1
    for s in range(1, U.n + 1):
        if U.n % s == 0 and is_closed_under(U, U.e * s):
            best = s
    return best


@dataclass
class SecantWitness:
    points: tuple[ProjPoint, ProjPoint]
    section_size: int


def secant_witness(U: FqSubspace, cap: int | None = None, budget: int | None = None,
                   points: np.ndarray | None = None) -> SecantWitness | None:
    """A line meeting L_U in exactly q+1 points, or None.

    For each point P (in canonical order, at most ``budget`` of them) the
    other points are projected from P; points on a common line through P
    collapse to the same image.
    """
    if U.d < 1:
        return None
    T = U.tower
    pts = enumerate_points(U, cap) if points is None else points
    q = U.q
    todo = pts if budget is None else pts[:budget]
    for P in todo:
        c = int(np.flatnonzero(P)[0])
        others = pts[~(pts == P).all(axis=1)]
        if others.shape[0] == 0:
            continue
        img = T.vsub(others, T.vmul(others[:, c:c + 1], P[None, :]))
        img = np.delete(img, c, axis=1)
        img = normalize_rows(T, img)
        keys, inverse, counts = np.unique(img, axis=0, return_inverse=True, return_counts=True)
        hit = np.flatnonzero(counts == q)
        if hit.size:
            j = int(np.flatnonzero(inverse.ravel() == hit[0])[0])
            return SecantWitness((tuple(int(a) for a in P), tuple(int(a) for a in others[j])), q + 1)
    return None


def line_section(U: FqSubspace, A, B, points: np.ndarray | None = None) -> np.ndarray:
    """Points of L_U on the line ⟨A, B⟩."""
    T = U.tower
    pts = enumerate_points(U) if points is None else points
    L = np.array([A, B], dtype=np.int64)
    on = []
    for P in pts:
        rows = np.vstack([vec_digits(T, T.vmul(L, xj)) for xj in fp_basis(T)])
        Pd = np.vstack([vec_digits(T, T.vmul(P[None, :], xj)) for xj in fp_basis(T)])
        if gfp.rank(np.vstack([rows, Pd]), T.p) == gfp.rank(rows, T.p):
            on.append(P)
    return np.array(on, dtype=np.int64).reshape(-1, U.d + 1)
