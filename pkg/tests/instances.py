"""Named instances shared by several test modules (built once)."""

from __future__ import annotations

import functools

from linsets.constructions import CasertaParams, JVParams, caserta_build, default_Z, jv_subspace, product_build
from linsets.fields import tower_for
from linsets.linset import span_fq

T8, _ = tower_for(2, 3)


def frobenius_plane():
    """{(x, x^2, a) : x in F_8, a in F_2} in PG(2, 8)."""
    g = T8.primitive
    vecs = [(T8.pow(g, j), T8.pow(g, 2 * j), 0) for j in range(3)] + [(0, 0, 1)]
    return span_fq(T8, vecs, 1)


@functools.lru_cache(maxsize=None)
def lift_33():
    Up = jv_subspace(JVParams(2, 6, 3, (2, 1)))
    Z = default_Z(Up.tower, Up.e, 3, 1)
    return caserta_build(CasertaParams(2, 2, 3, Z, Up))


@functools.lru_cache(maxsize=None)
def lift_82():
    Up = jv_subspace(JVParams(3, 4, 2, (2, 1)))
    Z = default_Z(Up.tower, Up.e, 2, 1)
    return caserta_build(CasertaParams(3, 2, 2, Z, Up))


def _product(q, s, t, ks):
    U2 = jv_subspace(JVParams(q, s * t, t, ks))
    T, e = U2.tower, U2.e
    U1 = span_fq(T, [(1,)], e * t)
    return product_build(U1, U2, t)


@functools.lru_cache(maxsize=None)
def product_21():
    return _product(2, 2, 2, (2, 1))


@functools.lru_cache(maxsize=None)
def product_41():
    return _product(2, 3, 3, (2, 1))
