"""Brute-force recomputation, independent of the fast path above the field layer.

The oracle walks all q^k - 1 nonzero vectors of U in plain Python, scales
each to its normalized representative, and counts how often each point is
hit.  A point of weight i is hit by exactly q^i - 1 vectors, so
weight = log_q(hits + 1).  Nothing here uses numpy linear algebra, the
echelon machinery or the parity checks of the fast path.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationCapExceeded, InternalInconsistency
from .fields import ENUMERATION_CAP, FieldTower, tower_for
from .linset import FqSubspace, LinearSetReport, check_identities, span_fq


@dataclass
class OracleConfig:
    max_vectors: int = ENUMERATION_CAP
    seed: int = 20240601
    instances: int = 200

    def __post_init__(self):
        if self.max_vectors <= 0 or self.instances <= 0:
            raise ValueError("caps must be positive")


def _span_vectors(T: FieldTower, rows: list[list[int]], width: int) -> list[tuple[int, ...]]:
    """Every F_p-combination of the digit rows, converted to field codes."""
    p, N = T.p, T.N
    out = []
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        acc = [0] * len(rows[0]) if rows else []
        for c, r in zip(coeffs, rows):
            if c:
                acc = [(a + c * b) % p for a, b in zip(acc, r)]
        out.append(tuple(T.from_digits(acc[j * N:(j + 1) * N]) for j in range(width)))
    return out


def _normalize(T: FieldTower, v) -> tuple[int, ...]:
    lead = next(a for a in v if a)
    inv = T.inv(lead)
    return tuple(T.mul(inv, a) for a in v)


def exhaustive_report(U: FqSubspace, config: OracleConfig | None = None) -> LinearSetReport:
    """Report by enumerating every vector of U.

    U is read only through its stored F_p digit rows; sums of digit vectors
    are sums of field elements, so the q^k vectors come out without any
    F_q-basis or echelon computation.
    """
    config = config or OracleConfig()
    T, q = U.tower, U.q
    if q**U.k > config.max_vectors:
        raise EnumerationCapExceeded(f"q^k = {q**U.k} exceeds {config.max_vectors}")
    rows = [[int(a) for a in r] for r in U.rows]
    vectors = _span_vectors(T, rows, U.d + 1)
    if len(set(vectors)) != q**U.k:
        raise InternalInconsistency("stored rows are not F_p-independent")
    hits = Counter(_normalize(T, v) for v in vectors if any(v))
    pts = sorted(hits)
    weights = []
    for P in pts:
        h = hits[P] + 1
        w = 0
        while q**w < h:
            w += 1
        if q**w != h:
            raise InternalInconsistency(f"multiplicity {hits[P]} is not q^i - 1")
        weights.append(w)
    N = [weights.count(i) for i in range(1, U.n + 1)]
    return LinearSetReport(
        q, U.n, U.d, U.k,
        np.array(pts, dtype=np.int64).reshape(-1, U.d + 1),
        np.array(weights, dtype=np.int64),
        N,
        [i for i in range(1, U.n + 1) if N[i - 1]],
        check_identities(q, U.k, len(pts), N),
    )


def random_subspace(q: int, n: int, d: int, k: int, seed: int) -> FqSubspace:
    """Seeded random k-dimensional F_q-subspace of F_{q^n}^{d+1}.

    Draws k×(d+1)n matrices over F_q (coordinates in the power basis of a
    generator of F_{q^n}) until one has full rank.
    """
    if not 1 <= k <= (d + 1) * n:
        raise ValueError("need 1 <= k <= (d+1)n")
    T, e = tower_for(q, n)
    rng = np.random.default_rng(seed)
    K = T.subfield_elements(e)
    basis = T.subfield_basis(e * n) if e == 1 else [T.pow(T.subfield_primitive(e * n), j) for j in range(n)]
    while True:
        idx = rng.integers(0, q, size=(k, d + 1, n))
        coeffs = K[idx]
        vecs = []
        for row in coeffs:
            vecs.append(tuple(T.sum(T.mul(int(c), b) for c, b in zip(cell, basis)) for cell in row))
        if not any(any(v) for v in vecs):
            continue
        U = span_fq(T, vecs, e)
        if U.k == k:
            return U


# ----------------------------------------------------------------------
# geometric field of linearity, tiny cases
# ----------------------------------------------------------------------
YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


@dataclass
class GeometricFieldResult:
    status: str
    certificate: dict = field(default_factory=dict)


def _line_sections(T: FieldTower, pts: list[tuple[int, ...]], budget: int):
    """Yield (P, Q, section size) for lines through pairs of points."""
    seen = set()
    for P in pts[:budget]:
        c = next(i for i, a in enumerate(P) if a)
        groups: dict[tuple, list] = {}
        for Q in pts:
            if Q == P:
                continue
            img = [T.sub(Q[j], T.mul(Q[c], P[j])) for j in range(len(P)) if j != c]
            groups.setdefault(_normalize(T, img), []).append(Q)
        for key, members in groups.items():
            line = frozenset([P, *members])
            if line in seen:
                continue
            seen.add(line)
            yield P, members[0], len(line)


def tiny_geometric_field_search(U: FqSubspace, s: int, *, budget: int = 2000,
                                report: LinearSetReport | None = None) -> GeometricFieldResult:
    """Is L_U equal, as a point set, to some F_{q^s}-linear set?

    ``no`` needs a certificate: the size, or a line section, that no
    F_{q^s}-linear set can have (sections of such sets have 1 point or at
    least q^s + 1 points, always 1 mod q^s).  ``yes`` needs an explicit
    F_{q^s}-subspace spanned by point representatives with the same point
    set.  Anything else is ``inconclusive``.
    """
    T = U.tower
    if U.n % s:
        raise ValueError("s must divide n")
    rep = report or exhaustive_report(U)
    pts = [tuple(int(a) for a in P) for P in rep.points]
    target = set(pts)
    Q = U.q**s
    if s == 1:
        return GeometricFieldResult(YES, {"subspace": "U itself"})
    if len(pts) % Q != 1 % Q:
        return GeometricFieldResult(NO, {"size": len(pts), "modulus": Q})
    if U.d >= 1:
        for P, R, m in _line_sections(T, pts, budget):
            if m < Q + 1 or m % Q != 1:
                return GeometricFieldResult(NO, {"line": [list(P), list(R)], "section_size": m, "q^s": Q})

    e_s = U.e * s
    nodes = 0

    def dfs(vecs: list, start: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if vecs:
            W = span_fq(T, vecs, e_s)
            try:
                got = set(tuple(int(a) for a in P) for P in exhaustive_report(W).points)
            except EnumerationCapExceeded:
                raise _Budget
            if not got <= target:
                return None
            if got == target:
                return vecs
        else:
            got = set()
        for i in range(start, len(pts)):
            if pts[i] in got:
                continue
            found = dfs(vecs + [pts[i]], i + 1)
            if found:
                return found
        return None

    try:
        found = dfs([], 0)
    except _Budget:
        return GeometricFieldResult(INCONCLUSIVE, {"reason": "budget exhausted"})
    if found:
        return GeometricFieldResult(YES, {"spanning_representatives": [list(v) for v in found]})
    return GeometricFieldResult(INCONCLUSIVE, {"reason": "no representative span matched"})


class _Budget(Exception):
    pass
