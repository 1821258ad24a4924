from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Poly, Symbol
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from linsets.errors import EnumerationCapExceeded
from linsets.fields import (
    FieldElement,
    FieldSubspace,
    FieldTower,
    build_tower,
    dual_basis,
    dual_basis_power,
    field_inverse,
    least_irreducible_fp,
    minimal_poly_and_degree,
    orthogonal_complement,
    prime_power,
    tower_for,
    trace,
    trace_gram,
)

T16 = build_tower(2, (1, 2, 4))
T9 = build_tower(3, (1, 2))
T81 = build_tower(3, (1, 2, 4))


def elems(T):
    return st.integers(min_value=0, max_value=T.order - 1)


def nonzero(T):
    return st.integers(min_value=1, max_value=T.order - 1)


def sympy_mul(T: FieldTower, a: int, b: int) -> int:
    """Product via sympy's dense GF(p)[x] arithmetic (high-degree-first lists)."""
    A = list(reversed(T.digits_of(a)))
    B = list(reversed(T.digits_of(b)))
    M = list(reversed(T.modulus))
    r = gf_rem(gf_mul(A, B, T.p, ZZ), M, T.p, ZZ)
    return T.from_digits(list(reversed([int(c) for c in r])))


# ---------------------------------------------------------------- construction
@pytest.mark.parametrize("p,deg", [(2, 1), (2, 4), (2, 6), (3, 2), (3, 5), (5, 2), (7, 3)])
def test_least_irreducible_is_irreducible_and_least(p, deg):
    f = least_irreducible_fp(p, deg)
    x = Symbol("x")
    assert len(f) == deg + 1 and f[-1] == 1
    assert Poly(list(reversed(f)), x, modulus=p).is_irreducible
    idx = sum(c * p**j for j, c in enumerate(f[:-1]))
    for smaller in range(idx):
        low = [(smaller // p**j) % p for j in range(deg)]
        assert not Poly(list(reversed(low + [1])), x, modulus=p).is_irreducible


def test_prime_power_parsing():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(12)


def test_tower_degrees_chain_and_cap():
    T, e = tower_for(4, 2)
    assert (T.p, T.degrees, e) == (2, (1, 2, 4), 2)
    with pytest.raises(ValueError):
        build_tower(2, (1, 3, 4))
    with pytest.raises(EnumerationCapExceeded):
        build_tower(2, (1, 21))


def test_json_round_trip():
    assert FieldTower.from_json(T81.to_json()) == T81
    rec = T81.to_json()
    assert len(rec["defining_polynomials"]) == len(T81.degrees) - 1


# ---------------------------------------------------------------- axioms
def test_every_small_tower_is_a_field(tower):
    T = tower
    rng = np.random.default_rng(T.order)
    for a, b in rng.integers(0, T.order, size=(200, 2)).tolist():
        assert T.mul(a, b) == sympy_mul(T, a, b)
        if a:
            assert T.mul(a, T.inv(a)) == 1
    assert len({T.pow(T.primitive, i) for i in range(T.order - 1)}) == T.order - 1


@pytest.mark.parametrize("T", [T16, T9, T81], ids=["16", "9", "81"])
def test_multiplication_matches_sympy_exhaustively(T):
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, T.order, size=(300, 2)):
        assert T.mul(int(a), int(b)) == sympy_mul(T, int(a), int(b))


@given(a=elems(T81), b=elems(T81), c=elems(T81))
def test_ring_axioms(a, b, c):
    T = T81
    assert T.add(a, b) == T.add(b, a)
    assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))
    assert T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))
    assert T.add(a, T.neg(a)) == 0
    assert T.sub(T.add(a, b), b) == a


@given(a=nonzero(T81))
def test_inverse_and_fermat(a):
    T = T81
    assert T.mul(a, T.inv(a)) == 1
    assert T.pow(a, T.order - 1) == 1


@given(a=elems(T16), b=elems(T16))
def test_frobenius_is_a_field_automorphism(a, b):
    T = T16
    assert T.frobenius(T.add(a, b)) == T.add(T.frobenius(a), T.frobenius(b))
    assert T.frobenius(T.mul(a, b)) == T.mul(T.frobenius(a), T.frobenius(b))
    assert T.frobenius(a, T.N) == a


def test_inverse_of_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        T16.inv(0)


def test_vectorized_ops_match_scalar_ops():
    T = T81
    A = np.arange(T.order)
    B = (A * 7 + 3) % T.order
    assert [T.mul(int(a), int(b)) for a, b in zip(A, B)] == T.vmul(A, B).tolist()
    assert [T.add(int(a), int(b)) for a, b in zip(A, B)] == T.vadd(A, B).tolist()
    assert np.array_equal(T.codes(T.digits(A)), A)


# ---------------------------------------------------------------- subfields
@pytest.mark.parametrize("T", [T16, T81, build_tower(2, (1, 3, 6))], ids=["16", "81", "64"])
def test_subfields_are_closed_and_sized(T):
    for m in T.degrees:
        K = T.subfield_elements(m).tolist()
        assert len(K) == T.p**m
        Ks = set(K)
        for a, b in itertools.islice(itertools.product(K, K), 400):
            assert T.add(a, b) in Ks and T.mul(a, b) in Ks
        g = T.subfield_primitive(m)
        assert T.element_degree(g) == m
        if m > 1:
            assert len({T.pow(g, i) for i in range(T.p**m - 1)}) == T.p**m - 1


@given(a=elems(T81))
def test_level_coordinates_round_trip(a):
    T = T81
    for lvl in range(1, len(T.degrees)):
        if not T.in_subfield(a, T.degrees[lvl]):
            with pytest.raises(ValueError):
                T.to_level_coordinates(a, lvl)
            continue
        assert T.from_level_coordinates(T.to_level_coordinates(a, lvl), lvl) == a


def test_defining_polynomials_vanish_at_level_generators():
    T = T81
    for i, (f, g) in enumerate(zip(T.defining_polynomials, T.level_generators)):
        val = 0
        for c in reversed(f):
            val = T.add(T.mul(val, g), c)
        assert val == 0
        assert T.element_degree(g, T.degrees[i]) == T.degrees[i + 1] // T.degrees[i]


# ---------------------------------------------------------------- trace
@given(a=elems(T16))
def test_trace_transitivity(a):
    x = FieldElement(T16, a)
    direct = trace(x, 1)
    assert direct == trace(trace(x, 2), 1, 2)
    assert trace(x, 2).degree() in (1, 2)


@given(a=elems(T81), b=elems(T81), c=st.integers(0, 8))
def test_trace_is_linear_over_the_target(a, b, c):
    T = T81
    lam = int(T.subfield_elements(2)[c])
    lhs = T.trace_code(T.add(T.mul(lam, a), b), 2)
    rhs = T.add(T.mul(lam, T.trace_code(a, 2)), T.trace_code(b, 2))
    assert lhs == rhs


def test_trace_is_onto():
    vals = {T16.trace_code(a, 2) for a in range(T16.order)}
    assert vals == set(T16.subfield_elements(2).tolist())


# ---------------------------------------------------------------- minimal polynomial
@given(a=nonzero(T81))
def test_minimal_polynomial_annihilates(a):
    x = FieldElement(T81, a)
    for base in (1, 2):
        f, deg = minimal_poly_and_degree(x, base)
        assert len(f) == deg + 1 and T81.N // base % deg == 0
        val = FieldElement(T81, 0)
        for c in reversed(f):
            val = val * x + c
        assert val.code == 0


# ---------------------------------------------------------------- dual bases
def power_basis(lam: FieldElement, n: int):
    return [lam**i for i in range(n)]


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2)])
def test_dual_basis_closed_form_matches_gram_inverse(q, n):
    T, e = tower_for(q, n)
    lam = FieldElement(T, T.subfield_primitive(e * n))
    B = power_basis(lam, n)
    closed = dual_basis_power(lam, e)
    assert closed == dual_basis(B, e)
    G = trace_gram(B, e)
    assert G == [list(r) for r in zip(*G)]  # the trace form is symmetric
    for i, u in enumerate(B):
        for j, v in enumerate(closed):
            assert T.trace_code(T.mul(u.code, v.code), e) == (1 if i == j else 0)


@given(seed=st.integers(0, 2**32 - 1))
def test_biduality(seed):
    T = T16
    rng = np.random.default_rng(seed)
    while True:
        B = [FieldElement(T, int(c)) for c in rng.integers(1, T.order, size=4)]
        try:
            D = dual_basis(B, 1)
            break
        except ValueError:
            continue
    assert dual_basis(D, 1) == B


def test_dependent_elements_rejected():
    B = [FieldElement(T16, c) for c in (1, 1, 2, 4)]
    with pytest.raises(ValueError):
        dual_basis(B, 1)


def test_gram_inverse_round_trip():
    B = power_basis(FieldElement(T9, T9.primitive), 2)
    G = trace_gram(B, 1)
    Gi = field_inverse(T9, G)
    prod = [[T9.sum(T9.mul(G[i][k], Gi[k][j]) for k in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


# ---------------------------------------------------------------- subspaces of the field
@given(st.lists(elems(T16), min_size=0, max_size=4))
def test_orthogonal_complement_is_an_involution(codes):
    S = FieldSubspace.span(T16, codes, 1)
    Sp = orthogonal_complement(S)
    assert S.fp_dim + Sp.fp_dim == T16.N
    assert orthogonal_complement(Sp) == S
    for a in S.basis_codes():
        for b in Sp.basis_codes():
            assert T16.trace_code(T16.mul(a, b), 1) == 0


def test_complement_of_subfield_closed_subspace_is_closed():
    S = FieldSubspace.span(T16, [T16.primitive], 2)
    assert S.is_closed_under(2) and S.dim(2) == 1
    assert orthogonal_complement(S).is_closed_under(2)


def test_field_subspace_elements_count():
    S = FieldSubspace.span(T81, [1, T81.primitive], 2)
    assert len(S.elements()) == 81 and S.dim(2) == 2
