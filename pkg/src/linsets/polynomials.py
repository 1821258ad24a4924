"""Univariate polynomials over a subfield F_q of a field tower.

Coefficients are field codes (see :mod:`linsets.fields`), stored low degree
first with trailing zeros stripped.  The zero polynomial has degree
``NEG_INF`` so that deg(fg) = deg f + deg g holds without special cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import sympy

from .fields import FieldTower, tower_for

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Poly:
    tower: FieldTower
    base_degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        for a in c:
            if not self.tower.in_subfield(a, self.base_degree):
                raise ValueError(f"coefficient {a} is not in F_q")
        object.__setattr__(self, "coeffs", tuple(int(a) for a in c))

    # constructors
    @classmethod
    def zero(cls, tower, base_degree=1) -> "Poly":
        return cls(tower, base_degree, ())

    @classmethod
    def one(cls, tower, base_degree=1) -> "Poly":
        return cls(tower, base_degree, (1,))

    @classmethod
    def x(cls, tower, base_degree=1) -> "Poly":
        return cls(tower, base_degree, (0, 1))

    def _new(self, coeffs) -> "Poly":
        return Poly(self.tower, self.base_degree, tuple(coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __add__(self, other: "Poly") -> "Poly":
        T = self.tower
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return self._new(T.add(x, y) for x, y in zip(a, b))

    def __neg__(self) -> "Poly":
        return self._new(self.tower.neg(a) for a in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        T = self.tower
        if isinstance(other, int):
            return self._new(T.mul(other, a) for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return self._new(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = T.add(out[i + j], T.mul(a, b))
        return self._new(out)

    __rmul__ = __mul__

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ValueError("the zero polynomial has no monic multiple")
        return self * self.tower.inv(self.lead)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        T = self.tower
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return self._new(()), self
        quo = [0] * (dq + 1)
        inv_lead = T.inv(other.lead)
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = T.mul(r[k + m - 1], inv_lead)
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[k + j] = T.sub(r[k + j], T.mul(c, b))
        return self._new(quo), self._new(r[: m - 1])

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, a: int) -> int:
        T = self.tower
        out = 0
        for c in reversed(self.coeffs):
            out = T.add(T.mul(out, a), c)
        return out

    def to_tower(self, tower: FieldTower, base_degree: int | None = None) -> "Poly":
        """Same polynomial in another tower; only prime-field coefficients transfer."""
        if tower == self.tower:
            return self
        if any(c >= self.tower.p for c in self.coeffs) or tower.p != self.tower.p:
            raise ValueError("only polynomials over the prime field move between towers")
        return Poly(tower, self.base_degree if base_degree is None else base_degree, self.coeffs)

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @classmethod
    def from_text(cls, tower, base_degree, text: str) -> "Poly":
        return cls(tower, base_degree, tuple(int(t) for t in text.split(",") if t.strip()))

    def __repr__(self):
        return f"Poly([{self.to_text()}])"


def gcd_monic(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor; undefined (error) when both are zero."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree ≤ deg f / 2."""
    d = f.degree
    if d == NEG_INF or d < 1:
        return False
    if d == 1:
        return True
    K = f.tower.subfield_elements(f.base_degree).tolist()
    for s in range(1, d // 2 + 1):
        for low in itertools.product(K, repeat=s):
            g = Poly(f.tower, f.base_degree, tuple(low) + (1,))
            if g.divides(f):
                return False
    return True


def monic_polys(tower: FieldTower, base_degree: int, degree: int, descending: bool = False):
    """All monic polynomials of ``degree``, ordered by the codes of their
    coefficients with the x^{degree-1} coefficient most significant."""
    K = tower.subfield_elements(base_degree).tolist()
    if descending:
        K = K[::-1]
    for high_first in itertools.product(K, repeat=degree):
        yield Poly(tower, base_degree, tuple(reversed(high_first)) + (1,))


def count_irreducible(q: int, s: int) -> int:
    """Number of monic irreducibles of degree s over F_q, (1/s) Σ_{h|s} μ(s/h) q^h."""
    if s < 1:
        raise ValueError("degree must be at least 1")
    total = sum(sympy.mobius(s // h) * q**h for h in sympy.divisors(s))
    if total % s:
        raise ArithmeticError("Möbius sum not divisible by s")
    return int(total // s)


def _pairwise_coprime(polys: Sequence[Poly]) -> bool:
    return all(gcd_monic(a, b).degree == 0 for a, b in itertools.combinations(polys, 2))


def coprime_system(q: int, ks: Sequence[int], *, budget: int = 200_000, tower: FieldTower | None = None):
    """Pairwise coprime monic polynomials with deg f_i = k_i - 1, or ``None``.

    Strategy, in order:

    1. if Σ(k_i - 1) ≤ q, products of x + c over consecutive disjoint runs of
       F_q taken in code order;
    2. otherwise distinct monic irreducibles inside each degree class, when
       each class fits the irreducible count;
    3. otherwise a backtracking search visiting candidates of each degree in
       descending coefficient order, limited to ``budget`` gcd tests.
    """
    if tower is None:
        tower, e = tower_for(q)
    else:
        e = next(m for m in tower.degrees if tower.p**m == q)
    degs = [int(k) - 1 for k in ks]
    if any(d < 0 for d in degs):
        raise ValueError("every k_i must be at least 1")
    one = Poly.one(tower, e)

    if sum(degs) <= q:
        K = tower.subfield_elements(e).tolist()
        out, pos = [], 0
        for d in degs:
            f = one
            for c in K[pos:pos + d]:
                f = f * Poly(tower, e, (c, 1))
            pos += d
            out.append(f)
        return out

    classes: dict[int, list[int]] = {}
    for i, d in enumerate(degs):
        if d > 0:
            classes.setdefault(d, []).append(i)
    if all(len(idx) <= count_irreducible(q, d) for d, idx in classes.items()):
        out = [one] * len(degs)
        for d, idx in classes.items():
            irr = (f for f in monic_polys(tower, e, d) if is_irreducible(f))
            for i, f in zip(idx, irr):
                out[i] = f
        return out

    order = sorted(range(len(degs)), key=lambda i: -degs[i])
    chosen: dict[int, Poly] = {}
    tests = 0

    def search(pos: int) -> bool:
        nonlocal tests
        if pos == len(order):
            return True
        i = order[pos]
        if degs[i] == 0:
            chosen[i] = one
            return search(pos + 1)
        for f in monic_polys(tower, e, degs[i], descending=True):
            ok = True
            for g in chosen.values():
                tests += 1
                if tests > budget:
                    raise _BudgetExhausted
                if gcd_monic(f, g).degree != 0:
                    ok = False
                    break
            if ok:
                chosen[i] = f
                if search(pos + 1):
                    return True
                del chosen[i]
        return False

    try:
        found = search(0)
    except _BudgetExhausted:
        return None
    return [chosen[i] for i in range(len(degs))] if found else None


class _BudgetExhausted(Exception):
    pass
