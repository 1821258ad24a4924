from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linsets.bounds import spans
from linsets.fields import tower_for
from linsets.linset import (
    FqSubspace,
    enumerate_points,
    is_closed_under,
    line_section,
    max_field_of_linearity,
    point_weights,
    report,
    secant_witness,
    span_fq,
    subspace_weight,
    weight,
)
from linsets.oracle import random_subspace
from linsets.projgeo import ProjSubspace, span_and_independence

from instances import product_21

T4, _ = tower_for(2, 2)
T16, _ = tower_for(2, 2, 4)

params = st.tuples(
    st.sampled_from([2, 3]), st.sampled_from([2, 3]), st.sampled_from([1, 2]), st.integers(1, 7), st.integers(0, 10**6)
).filter(lambda t: t[3] <= (t[2] + 1) * t[1] and t[0] ** t[3] <= 2**12)


def f4_times_f2():
    return span_fq(T4, [(1, 0), (T4.primitive, 0), (0, 1)], 1)


def test_small_example_weights():
    U = f4_times_f2()
    rep = report(U)
    assert (U.k, rep.size, rep.N) == (3, 5, [4, 1])
    assert rep.weight_of((1, 0)) == 2
    assert rep.weight_of((1, 1)) == 1
    assert weight(U, (0, 1)) == 1


def test_field_of_linearity_examples():
    assert max_field_of_linearity(f4_times_f2()) == 1
    g4 = T16.subfield_primitive(2)
    U = span_fq(T16, [(1, 0), (g4, 0), (0, 1), (0, g4)], 1)
    assert max_field_of_linearity(U) == 2
    assert is_closed_under(U, 2) and not is_closed_under(U, 4)
    W = span_fq(T16, [(1, 0), (0, 1)], 4)
    assert max_field_of_linearity(FqSubspace(T16, 1, 1, W.rows)) == 4


@given(params)
def test_identities_hold_on_random_subspaces(t):
    q, n, d, k, seed = t
    rep = report(random_subspace(q, n, d, k, seed))
    assert all(rep.identities.values())
    assert sum(rep.N) == rep.size


@given(params)
def test_weight_positive_exactly_on_points(t):
    q, n, d, k, seed = t
    U = random_subspace(q, n, d, k, seed)
    pts = enumerate_points(U)
    T = U.tower
    rng = np.random.default_rng(seed)
    for v in rng.integers(0, T.order, size=(10, d + 1)):
        if not v.any():
            continue
        lead = v[np.flatnonzero(v)[0]]
        P = T.vmul(v, T.inv(int(lead)))
        inside = bool((pts == P).all(axis=1).any())
        assert (weight(U, tuple(int(a) for a in P)) >= 1) == inside


@given(params)
def test_independent_subspaces_weights(t):
    q, n, d, k, seed = t
    U = random_subspace(q, n, d, k, seed)
    rep = report(U)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        m = int(rng.integers(1, d + 2))
        idx = rng.choice(rep.size, size=min(m, rep.size), replace=False)
        pts = [tuple(int(a) for a in rep.points[i]) for i in idx]
        S, indep = span_and_independence(U.tower, pts)
        if not indep:
            continue
        total = sum(rep.weight_of(P) for P in pts)
        assert total <= k
        if total == k:
            # U lies inside the direct sum, so a spanning L_U forces the full space
            assert all(S.contains(P) for P in rep.points.tolist())
            if spans(U):
                assert S.rank == d + 1


def test_complementary_weights_span_everything():
    # E_0 has weight 2 and E_1 weight 1 in F_4 x F_2; 2 + 1 = k and they span the line
    U = f4_times_f2()
    assert weight(U, (1, 0)) + weight(U, (0, 1)) == U.k
    S, indep = span_and_independence(U.tower, [(1, 0), (0, 1)])
    assert indep and S.rank == 2


def test_subspace_weight_of_whole_space_is_rank():
    U = random_subspace(3, 3, 2, 5, 7)
    assert subspace_weight(U, np.eye(3, dtype=np.int64)) == 5


def test_json_round_trip_and_determinism():
    U = random_subspace(2, 3, 2, 4, 11)
    V = FqSubspace.from_json(json.loads(json.dumps(U.to_json())))
    assert U == V
    assert random_subspace(2, 3, 2, 4, 11) == U


def test_report_points_sorted_and_normalized():
    rep = report(random_subspace(3, 2, 2, 4, 3))
    P = rep.points
    lead = P[np.arange(P.shape[0]), (P != 0).argmax(axis=1)]
    assert (lead == 1).all()
    assert [tuple(r) for r in P.tolist()] == sorted(tuple(r) for r in P.tolist())
    assert np.array_equal(point_weights(random_subspace(3, 2, 2, 4, 3), P), rep.weights)


# ---------------------------------------------------------------- secants
def test_secant_in_canonical_subgeometry():
    T, e = tower_for(2, 3)
    U = span_fq(T, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], e)
    w = secant_witness(U)
    assert w is not None and w.section_size == 3
    assert line_section(U, *w.points).shape[0] == 3


def test_no_secant_for_a_full_subspace():
    T, e = tower_for(2, 2)
    U = span_fq(T, [(1, 0, 0), (0, 1, 0)], 2)
    assert secant_witness(FqSubspace(T, e, 2, U.rows)) is None


def test_product_21_has_no_short_secant():
    # every line through two of its points meets it in exactly q^2 + 1 = 5 points
    b = product_21()
    assert secant_witness(b.U, points=b.report.points) is None
    pts = b.report.points
    for j in range(1, 6):
        assert line_section(b.U, pts[0], pts[j], pts).shape[0] == 5
