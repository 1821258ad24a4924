from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linsets.fields import tower_for
from linsets.linset import enumerate_points, report, span_fq
from linsets.oracle import exhaustive_report, random_subspace
from linsets.projgeo import (
    ProjSubspace,
    QuotientMap,
    count_I_Omega,
    intersect,
    is_canonical_subgeometry,
    project,
    quotient_normalized,
    section_points,
    span_and_independence,
    span_keys,
)

from instances import T8, frobenius_plane


def test_frobenius_plane_counts():
    U = frobenius_plane()
    rep = report(U)
    assert (U.k, rep.size, rep.N) == (4, 15, [15, 0, 0])
    line = ProjSubspace.from_equation(T8, [0, 0, 1])
    on = rep.points[[line.contains(P) for P in rep.points.tolist()]]
    off = rep.points[[not line.contains(P) for P in rep.points.tolist()]]
    assert on.shape[0] == 7 and off.shape[0] == 8
    assert {count_I_Omega(U, ProjSubspace(T8, [P.tolist()])) for P in on} == {5}
    assert {count_I_Omega(U, ProjSubspace(T8, [P.tolist()])) for P in off} == {7}


def test_hyperplane_from_equation():
    H = ProjSubspace.from_equation(T8, [1, 3, 5])
    assert H.rank == 2
    for v in H.basis.tolist():
        assert T8.sum(T8.mul(c, a) for c, a in zip([1, 3, 5], v)) == 0
    with pytest.raises(ValueError):
        ProjSubspace.from_equation(T8, [0, 0, 0])


def test_span_and_independence():
    S, ind = span_and_independence(T8, [(1, 0, 0), (0, 1, 0)])
    assert ind and S.rank == 2
    S, ind = span_and_independence(T8, [(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert not ind and S.rank == 2


def test_json_round_trip():
    H = ProjSubspace.from_equation(T8, [1, 3, 5])
    assert ProjSubspace.from_json(H.to_json()) == H


def test_quotient_by_everything_rejected():
    with pytest.raises(ValueError):
        QuotientMap(ProjSubspace(T8, np.eye(3, dtype=np.int64).tolist()))


cases = st.tuples(st.sampled_from([2, 3]), st.sampled_from([2, 3]), st.integers(3, 7), st.integers(0, 10**6)).filter(
    lambda t: t[2] <= 3 * t[1] and t[0] ** t[2] <= 2**11
)


@given(cases)
def test_projection_size_equals_I_omega(t):
    q, n, k, seed = t
    U = random_subspace(q, n, 2, k, seed)
    pts = enumerate_points(U)
    P = ProjSubspace(U.tower, [pts[seed % pts.shape[0]].tolist()])
    if P.rank == 3:
        return
    I = count_I_Omega(U, P, points=pts)
    off = pts[[not P.contains(v) for v in pts.tolist()]]
    assert I == np.unique(quotient_normalized(P, off), axis=0).shape[0]
    assert I == np.unique(span_keys(P, off), axis=0).shape[0]


@given(cases)
def test_projection_is_transitive(t):
    q, n, k, seed = t
    U = random_subspace(q, n, 2, k, seed)
    T = U.tower
    rng = np.random.default_rng(seed)
    W1 = ProjSubspace(T, [[1] + rng.integers(0, T.order, size=2).tolist()])
    W2 = ProjSubspace(T, np.vstack([W1.basis, [[0, 1, int(rng.integers(0, T.order))]]]).tolist())
    if not QuotientMap(W2)(np.array(U.generators)).any():
        return
    direct = exhaustive_report(project(U, W2))
    Ubar = project(U, W1)
    img = QuotientMap(W1)(W2.basis)
    W2bar = ProjSubspace(T, img[img.any(axis=1)].tolist())
    iterated = exhaustive_report(project(Ubar, W2bar))
    assert direct.summary() == iterated.summary()


def test_intersection_and_section_agree():
    U = frobenius_plane()
    line = ProjSubspace.from_equation(T8, [0, 0, 1])
    X = intersect(U, line)
    assert X.k == 3
    assert section_points(U, line).shape[0] == 7


def test_canonical_tests():
    U = frobenius_plane()
    # X_2 = 0 carries 7 points of weight 1: too many for a canonical subline
    assert not is_canonical_subgeometry(U, ProjSubspace.from_equation(T8, [0, 0, 1]))
    # the line through (0,0,1) and (1,1,0) meets L_U in q + 1 = 3 points
    line = ProjSubspace(T8, [[0, 0, 1], [1, 1, 0]])
    assert section_points(U, line).shape[0] == 3
    assert is_canonical_subgeometry(U, line)
    assert is_canonical_subgeometry(U, ProjSubspace(T8, [[1, 1, 0]]))


def test_single_heavy_point_is_not_canonical():
    # one point always has (q^1-1)/(q-1) = 1 point; its weight decides
    T, e = tower_for(2, 2)
    U = span_fq(T, [(1, 0), (T.primitive, 0), (0, 1)], e)
    assert not is_canonical_subgeometry(U, ProjSubspace(T, [[1, 0]]))
    assert is_canonical_subgeometry(U, ProjSubspace(T, [[0, 1]]))
