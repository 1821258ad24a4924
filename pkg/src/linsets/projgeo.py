"""Projective subspaces of PG(d, q^n), quotients and projections of linear sets."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import gfp
from .errors import InternalInconsistency
from .fields import FieldTower, field_rref
from .linset import (
    FqSubspace,
    enumerate_points,
    fp_basis,
    normalize_rows,
    point_weights,
    span_fq,
    subspace_weight,
    vec_digits,
)


class ProjSubspace:
    """PG(W) for an F_{q^n}-subspace W, kept as an RREF basis over the top field."""

    def __init__(self, tower: FieldTower, rows: Sequence[Sequence[int]]):
        rows = [list(map(int, r)) for r in rows]
        if not rows:
            raise ValueError("need at least one vector")
        width = len(rows[0])
        R, piv = field_rref(tower, rows)
        if not R:
            raise ValueError("all vectors are zero")
        self.tower = tower
        self.basis = np.array(R, dtype=np.int64).reshape(-1, width)
        self.pivots = piv

    @classmethod
    def from_equation(cls, tower: FieldTower, coeffs: Sequence[int]) -> "ProjSubspace":
        """The hyperplane Σ a_i X_i = 0."""
        R, piv = field_rref(tower, [list(coeffs)])
        if not R:
            raise ValueError("zero linear form")
        c, row = piv[0], R[0]
        width = len(coeffs)
        rows = []
        for f in range(width):
            if f == c:
                continue
            v = [0] * width
            v[f] = 1
            v[c] = tower.neg(row[f])
            rows.append(v)
        return cls(tower, rows)

    @property
    def d(self) -> int:
        return self.basis.shape[1] - 1

    @property
    def rank(self) -> int:
        """Vector dimension of W."""
        return self.basis.shape[0]

    @property
    def proj_dim(self) -> int:
        return self.rank - 1

    def fp_rows(self) -> np.ndarray:
        T = self.tower
        return np.vstack([vec_digits(T, T.vmul(self.basis, xj)) for xj in fp_basis(T)])

    def contains(self, v: Sequence[int]) -> bool:
        if self.rank == self.d + 1:
            return True
        return bool(QuotientMap(self).is_zero(np.array([v]))[0])

    def key(self) -> bytes:
        return self.basis.tobytes()

    def __eq__(self, other):
        return isinstance(other, ProjSubspace) and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"ProjSubspace(proj_dim={self.proj_dim}, basis={self.basis.tolist()})"

    def to_json(self) -> dict:
        T = self.tower
        return {"tower": T.to_json(), "basis": [[T.digits_of(int(a)) for a in row] for row in self.basis]}

    @classmethod
    def from_json(cls, record: dict, tower: FieldTower | None = None) -> "ProjSubspace":
        from .fields import FieldTower as FT

        T = tower or FT.from_json(record["tower"])
        return cls(T, [[T.from_digits(c) for c in row] for row in record["basis"]])


class QuotientMap:
    """V → V/W in the coordinates of the non-pivot columns of W's echelon basis."""

    def __init__(self, W: ProjSubspace):
        self.W = W
        self.free = [c for c in range(W.d + 1) if c not in W.pivots]
        if not self.free:
            raise ValueError("cannot take the quotient by the whole space")

    @property
    def target_d(self) -> int:
        return len(self.free) - 1

    def __call__(self, V) -> np.ndarray:
        T = self.W.tower
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        out = V.copy()
        for i, c in enumerate(self.W.pivots):
            out = T.vsub(out, T.vmul(V[:, c:c + 1], self.W.basis[i][None, :]))
        return out[:, self.free]

    def is_zero(self, V) -> np.ndarray:
        W = self.W
        if W.rank == W.d + 1:
            return np.ones(np.atleast_2d(V).shape[0], dtype=bool)
        return ~self(V).any(axis=1)


def _as_rows(item) -> np.ndarray:
    if isinstance(item, ProjSubspace):
        return item.basis
    return np.atleast_2d(np.asarray(item, dtype=np.int64))


def span_and_independence(tower: FieldTower, items) -> tuple[ProjSubspace, bool]:
    """Span of points/subspaces and whether they are independent."""
    items = list(items)
    if not items:
        raise ValueError("nothing to span")
    blocks = [_as_rows(it) for it in items]
    dims = sum(ProjSubspace(tower, b).rank for b in blocks)
    S = ProjSubspace(tower, np.vstack(blocks).tolist())
    return S, S.rank == dims


def intersect(U: FqSubspace, W: ProjSubspace) -> FqSubspace | None:
    """U ∩ W as an F_q-subspace (None when it is zero)."""
    X = gfp.intersection(U.rows, W.fp_rows(), U.tower.p)
    if X.shape[0] == 0:
        return None
    return FqSubspace(U.tower, U.e, U.d, X)


def section_points(U: FqSubspace, W: ProjSubspace, cap=None) -> np.ndarray:
    """Points of L_U ∩ PG(W)."""
    X = intersect(U, W)
    if X is None:
        return np.zeros((0, U.d + 1), dtype=np.int64)
    return enumerate_points(X, cap)


def is_canonical_subgeometry(U: FqSubspace, W: ProjSubspace, cap=None) -> bool:
    """Does L_U meet PG(W) in a canonical F_q-subgeometry of PG(W)?

    Two tests are run and must agree: (a) weight(W) = dim W, all section
    points have weight 1 and span W; (b) U ∩ W, built explicitly, has
    dimension r and exactly (q^r-1)/(q-1) points spanning W.
    """
    r = W.rank
    X = intersect(U, W)
    pts = np.zeros((0, U.d + 1), dtype=np.int64) if X is None else enumerate_points(X, cap)
    spans = pts.shape[0] > 0 and ProjSubspace(U.tower, pts.tolist()) == W
    a = (
        subspace_weight(U, W.basis) == r
        and bool((point_weights(U, pts) == 1).all())
        and spans
    )
    b = X is not None and X.k == r and pts.shape[0] == (U.q**r - 1) // (U.q - 1) and spans
    if a != b:
        raise InternalInconsistency("canonical-subgeometry tests disagree")
    return a


def project(U: FqSubspace, W: ProjSubspace) -> FqSubspace:
    """The F_q-subspace (U+W)/W of the quotient V/W."""
    Q = QuotientMap(W)
    img = Q(np.array(U.generators, dtype=np.int64))
    if not img.any():
        raise ValueError("U is contained in W; the projection is empty")
    return span_fq(U.tower, img[img.any(axis=1)].tolist(), U.e)


def count_I_Omega(U: FqSubspace, W: ProjSubspace, cap=None, points: np.ndarray | None = None) -> int:
    """Number of (r)-spaces through PG(W) containing a point of L_U outside it.

    Computed as |L_{(U+W)/W}| and again by bucketing the points of L_U \\ Ω
    by the echelon basis of ⟨W, P⟩; a disagreement raises.
    """
    T = U.tower
    pts = enumerate_points(U, cap) if points is None else points
    Qm = QuotientMap(W)
    off = pts[~Qm.is_zero(pts)]
    if off.shape[0] == 0:
        a = 0
    else:
        a = enumerate_points(project(U, W), cap).shape[0]
    b = np.unique(span_keys(W, off), axis=0).shape[0] if off.shape[0] else 0
    if a != b:
        raise InternalInconsistency(f"I_Omega: projection gives {a}, bucketing gives {b}")
    return a


def span_keys(W: ProjSubspace, pts: np.ndarray) -> np.ndarray:
    """Flattened RREF of ⟨W, P⟩ for each point P outside W (vectorized)."""
    T = W.tower
    pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
    M = pts.shape[0]
    red = pts.copy()
    for i, c in enumerate(W.pivots):
        red = T.vsub(red, T.vmul(pts[:, c:c + 1], W.basis[i][None, :]))
    red = normalize_rows(T, red)
    c_new = (red != 0).argmax(axis=1)
    rows = np.empty((M, W.rank + 1, W.d + 1), dtype=np.int64)
    for i in range(W.rank):
        wi = np.broadcast_to(W.basis[i], (M, W.d + 1))
        f = wi[np.arange(M), c_new][:, None]
        rows[:, i] = T.vsub(wi, T.vmul(f, red))
    rows[:, W.rank] = red
    piv = np.array(W.pivots)[None, :].repeat(M, axis=0)
    piv = np.hstack([piv, c_new[:, None]])
    order = np.argsort(piv, axis=1)
    rows = np.take_along_axis(rows, order[:, :, None], axis=1)
    return rows.reshape(M, -1)


def quotient_normalized(W: ProjSubspace, pts: np.ndarray) -> np.ndarray:
    """Images in PG(V/W) of points outside W, normalized."""
    return normalize_rows(W.tower, QuotientMap(W)(pts))
