from __future__ import annotations

import itertools

import numpy as np
import pytest

from linsets.bounds import classify_minimum
from linsets.constructions import (
    CasertaParams,
    JVParams,
    apply_gl,
    caserta_build,
    default_Z,
    jv_build,
    jv_point,
    jv_point_weight,
    jv_proper_hyperplane,
    jv_subspace,
    prime_build,
    product_build,
    swap_matrix,
    unit_vector,
)
from linsets.errors import HypothesisError
from linsets.fields import FieldSubspace
from linsets.linset import report, span_fq, weight
from linsets.polynomials import Poly, coprime_system, gcd_monic

from instances import lift_33, lift_82, product_21, product_41


def lift(q, s, t, ks, i=0, r=1):
    Up = jv_subspace(JVParams(q, s * t, t, ks))
    if i:
        Up = apply_gl(Up, swap_matrix(len(ks) - 1, i))
    Z = default_Z(Up.tower, Up.e, t, r)
    return caserta_build(CasertaParams(q, s, t, Z, Up))


# ---------------------------------------------------------------- JV
@pytest.mark.parametrize("q,t,ks,size", [(2, 4, (2, 2), 9), (2, 5, (3, 2), 17), (3, 5, (2, 2, 2), 325)])
def test_jv_examples(q, t, ks, size):
    b = jv_build(JVParams(q, t, t, ks))
    assert b.ok and b.report.size == size and b.U.k == sum(ks)


def test_jv_n_k1():
    b = jv_build(JVParams(2, 5, 5, (3, 2)))
    assert b.report.N[1] == 4 and b.report.spectrum == [1, 2, 3]


def test_jv_rejects_bad_parameters():
    with pytest.raises(HypothesisError):
        JVParams(2, 3, 3, (3, 2))  # k_0 + k_1 > t + 1
    with pytest.raises(HypothesisError):
        JVParams(2, 4, 4, (1, 2))
    with pytest.raises(HypothesisError):
        JVParams(2, 4, 4, (2, 2), lam=1)


def test_jv_point_weight_against_enumeration():
    p = JVParams(2, 5, 5, (3, 2))
    U = jv_subspace(p)
    T = p.tower
    polys = [Poly(T, 1, c) for deg in range(5) for c in itertools.product(range(2), repeat=deg + 1)]
    polys = [f for f in polys if not f.is_zero()]
    checked = 0
    for f0, f1 in itertools.product([Poly.zero(T)] + polys, repeat=2):
        if f0.is_zero() and f1.is_zero():
            continue
        nz = [f for f in (f0, f1) if not f.is_zero()]
        g = nz[0] if len(nz) == 1 else gcd_monic(*nz)
        if g.degree != 0:
            continue
        w = jv_point_weight(p, [f0, f1])
        if w >= 1:
            assert weight(U, jv_point(p, [f0, f1])) == w
            checked += 1
    assert checked > 20
    assert jv_point_weight(p, [Poly.one(T), Poly.zero(T)]) == 3
    assert jv_point_weight(p, [Poly.x(T), Poly.one(T)]) == 2
    with pytest.raises(HypothesisError):
        jv_point_weight(p, [Poly.x(T), Poly.x(T)])


def test_proper_hyperplane():
    p = JVParams(3, 5, 5, (2, 2, 2))
    T = p.tower
    g = [Poly(T, 1, (c, 1)) for c in range(3)]
    H, v = jv_proper_hyperplane(p, g)
    assert v == {"passes_through_P_i": True, "section_size": 4, "expected_section_size": 4, "canonical": True}


def test_proper_hyperplane_line_case():
    p = JVParams(2, 4, 4, (2, 2))
    gs = coprime_system(2, [2, 2], tower=p.tower)
    H, v = jv_proper_hyperplane(p, gs)
    # in PG(1, q^n) the hyperplane is one point, a canonical PG(0, q)
    assert H.rank == 1 and v["section_size"] == v["expected_section_size"] == 1 and v["canonical"]


def test_proper_hyperplane_unit_polynomials():
    p = JVParams(3, 5, 5, (2, 2, 1))
    T = p.tower
    H, v = jv_proper_hyperplane(p, [Poly.x(T), Poly(T, 1, (1, 1)), Poly.one(T)])
    assert v["canonical"] and v["section_size"] == 4


def test_proper_hyperplane_rejects_shared_factor():
    p = JVParams(3, 5, 5, (2, 2, 2))
    T = p.tower
    with pytest.raises(HypothesisError):
        jv_proper_hyperplane(p, [Poly.x(T)] * 3)


# ---------------------------------------------------------------- lift
def test_lift_33():
    b = lift_33()
    assert b.ok
    assert (b.U.k, b.report.size, b.report.weight_of((1, 0)), b.report.N) == (6, 33, 5, [32, 0, 0, 0, 1, 0])


def test_lift_over_f3():
    b = lift_82()
    assert b.ok and b.report.size == 82


def test_lift_of_a_single_point():
    Up = jv_subspace(JVParams(2, 6, 3, (1, 1)))
    T, e = Up.tower, Up.e
    Up = span_fq(T, [(1, 0)], e)
    Z = default_Z(T, e, 3, 1)
    b = caserta_build(CasertaParams(2, 2, 3, Z, Up))
    assert b.report.size == 1 and b.report.weight_of((1, 0)) == 3 + 1


def test_lift_rejects_one_in_Z():
    Up = jv_subspace(JVParams(2, 6, 3, (2, 1)))
    with pytest.raises(HypothesisError):
        CasertaParams(2, 2, 3, FieldSubspace.span(Up.tower, [1], 3), Up)


@pytest.mark.parametrize("q,s,t,ks,i", [
    (2, 2, 3, (2, 1), 0), (2, 2, 3, (3, 1), 1), (2, 2, 3, (2, 2), 1), (2, 2, 3, (2, 1, 1), 2), (3, 2, 2, (2, 1), 1),
])
def test_lift_weight_spectrum(q, s, t, ks, i):
    b = lift(q, s, t, ks, i)
    k0, k1 = ks[0], ks[1]
    w = ks[i]
    top = t + w
    if w < k0 and k1 < k0:
        expected = list(range(1, k1 + 1)) + [k0, top]
    else:
        expected = list(range(1, k1 + 1)) + [top]
    assert b.report.spectrum == expected


def _jv_matches(q, n, d, k, N):
    out = []
    for t in [x for x in range(2, n + 1) if n % x == 0]:
        for kk in itertools.product(range(1, k + 1), repeat=d + 1):
            if sum(kk) != k or list(kk) != sorted(kk, reverse=True) or kk[0] + kk[1] > t + 1:
                continue
            if jv_build(JVParams(q, n, t, kk)).report.N == N:
                out.append((t, kk))
    return out


@pytest.mark.parametrize("q,s,t,ks,i,match", [
    (2, 2, 3, (2, 2), 1, True),
    (2, 2, 3, (3, 1), 1, False),
    (2, 2, 4, (4, 1), 1, False),
])
def test_lift_weight_distribution_versus_jv(q, s, t, ks, i, match):
    b = lift(q, s, t, ks, i)
    found = _jv_matches(q, s * t, b.U.d, b.U.k, b.report.N)
    assert bool(found) == match
    if match:
        assert (s * t, (ks[0] + t,) + ks[1:]) in found


# ---------------------------------------------------------------- prime family
@pytest.mark.parametrize("q,n,d,r,k1,size", [(3, 2, 1, 1, 2, 10), (2, 2, 1, 1, 2, 5), (3, 2, 2, 0, 6, 91)])
def test_prime_examples(q, n, d, r, k1, size):
    b = prime_build(q, n, d, r, k1)
    assert b.ok and b.report.size == size


def test_prime_window():
    with pytest.raises(HypothesisError):
        prime_build(2, 2, 1, 1, 1)


# ---------------------------------------------------------------- products
def test_product_21():
    b = product_21()
    assert b.ok and (b.U.k, b.report.size, b.report.N[:2]) == (5, 21, [16, 5])
    # k_1 = 1 > d_1 s = 0, so the below-bound statement makes no claim here
    assert "d_minimum" not in b.prediction.claims


def test_product_below_bound_in_pg3():
    U2 = jv_subspace(JVParams(2, 4, 2, (2, 1)))
    T = U2.tower
    b = product_build(span_fq(T, [(1, 0)], 2), U2, 2)
    assert b.prediction.claims == {"rd_minimum": [1, 3], "d_minimum": False}
    cls = classify_minimum(b.U, b.report)
    assert not cls.d_minimum and cls.is_rd_minimum(1)
    assert b.report.size == 2**4 + 2**2 + 1 == 21 and cls.d_minimum_value == 29


def test_product_with_single_point_u2():
    U2 = span_fq(product_21().U.tower, [(1,)], 1)
    T = U2.tower
    U1 = span_fq(T, [(1,)], 2)
    b = product_build(U1, U2, 2)
    assert b.report.size == 1 + 4


def test_product_41_section():
    b = product_41()
    assert b.report.size == 41 == 2**5 + 2**3 + 1
    on = [P for P in b.report.points.tolist() if P[0] == 0]
    assert len(on) == 5


def test_product_rejects_open_u1():
    U2 = product_21().U
    T = U2.tower
    with pytest.raises(HypothesisError):
        product_build(span_fq(T, [(1,)], 1), jv_subspace(JVParams(2, 4, 2, (2, 1))), 2)


# ---------------------------------------------------------------- linear maps
def test_apply_gl_identity_and_swap():
    p = JVParams(2, 5, 5, (3, 2))
    U = jv_subspace(p)
    assert apply_gl(U, [[1, 0], [0, 1]]) == U
    V = apply_gl(U, swap_matrix(1, 1))
    assert report(V).N == report(U).N
    with pytest.raises(ValueError):
        apply_gl(U, [[1, 1], [1, 1]])


def test_shear_moves_weight_of_e0():
    p = JVParams(3, 5, 5, (2, 2, 2))
    T = p.tower
    U = jv_subspace(p)
    M = [[1, 0, 0], [T.neg(p.lam), 1, 0], [0, 0, 1]]
    V = apply_gl(U, M)
    assert weight(U, unit_vector(2, 0)) == 2
    assert weight(V, unit_vector(2, 0)) == 1
