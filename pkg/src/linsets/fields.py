"""Finite field towers with one flat representation.

A tower F_p ⊆ F_{p^{d_1}} ⊆ ... ⊆ F_{p^N} is realised inside the top field
F_p[x]/(m(x)), where m is the lexicographically least monic irreducible of
degree N over F_p.  An element is an integer *code*

    c = c_0 + c_1 p + ... + c_{N-1} p^{N-1},

the base-p number formed from its coefficients in the power basis
1, x, ..., x^{N-1}.  Subfields are the elements fixed by a Frobenius power,
so subfield elements are ordinary top-field codes and embeddings are the
identity on codes.  Each level also carries its own defining polynomial
over the level below (lexicographically least monic irreducible, with
coefficient order given by codes) together with a root of it, which fixes
the level's power basis.

All degrees in this module are absolute degrees over the prime field.

Scalar arithmetic goes through log/exp tables; numpy versions of the same
operations (``vadd``, ``vmul``, ...) act elementwise on code arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import gfp
from .errors import EnumerationCapExceeded

ENUMERATION_CAP = 2**20


def least_irreducible_fp(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of ``degree`` over F_p.

    Coefficients are returned low degree first.  Candidates are ordered by
    the code of their non-leading part, so the x^{degree-1} coefficient is
    the most significant one.
    """
    x = sympy.Symbol("x")
    for idx in range(p**degree):
        low = [(idx // p**j) % p for j in range(degree)]
        coeffs = low + [1]
        if sympy.Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible:
            return tuple(coeffs)
    raise RuntimeError(f"no irreducible polynomial of degree {degree} over F_{p}")


def _pmulmod(a: list[int], b: list[int], mod: Sequence[int], p: int) -> list[int]:
    N = len(mod) - 1
    prod = [0] * (2 * N - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(2 * N - 2, N - 1, -1):
        c = prod[k]
        if c:
            for j in range(N + 1):
                prod[k - N + j] = (prod[k - N + j] - c * mod[j]) % p
    return prod[:N]


def _ppow(a: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1] + [0] * (len(mod) - 2)
    base = list(a)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


class FieldTower:
    """The chain F_p ⊆ F_{p^{d_1}} ⊆ ... ⊆ F_{p^N}.

    Parameters
    ----------
    p : int
        The characteristic.
    degrees : sequence of int
        Ascending absolute degrees, each dividing the next.  A leading 1
        (the prime field) is added when missing.
    allow_large : bool
        Permit top fields above ``ENUMERATION_CAP`` elements.
    """

    def __init__(self, p: int, degrees: Sequence[int], *, allow_large: bool = False):
        if not sympy.isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        degrees = [int(d) for d in degrees]
        if not degrees or any(d < 1 for d in degrees):
            raise ValueError("degrees must be positive")
        if degrees[0] != 1:
            degrees = [1] + degrees
        for lo, hi in zip(degrees, degrees[1:]):
            if hi <= lo or hi % lo:
                raise ValueError(f"degrees {degrees} do not form a strict divisor chain")
        self.p = p
        self.degrees = tuple(degrees)
        self.N = degrees[-1]
        self.order = p**self.N
        if self.order > ENUMERATION_CAP and not allow_large:
            raise EnumerationCapExceeded(
                f"F_{p}^{self.N} has {self.order} elements, above the cap {ENUMERATION_CAP}"
            )
        self.modulus = least_irreducible_fp(p, self.N)
        self._build_tables()
        self.defining_polynomials, self.level_generators = self._build_levels()

    # ------------------------------------------------------------------
    # table construction
    # ------------------------------------------------------------------
    def _mulx(self, v: list[int]) -> list[int]:
        top = v[-1]
        out = [0] + v[:-1]
        if top:
            out = [(out[j] - top * self.modulus[j]) % self.p for j in range(self.N)]
        return out

    def _mult_matrix(self, c: list[int]) -> np.ndarray:
        """N×N matrix over F_p of multiplication by the element with digits ``c``."""
        M = np.zeros((self.N, self.N), dtype=np.int64)
        col = list(c)
        for j in range(self.N):
            M[:, j] = col
            col = self._mulx(col)
        return M

    def _find_primitive(self) -> int:
        p, N, Q = self.p, self.N, self.order
        if Q == 2:
            return 1
        primes = list(sympy.factorint(Q - 1))
        one = [1] + [0] * (N - 1)
        for code in range(2, Q):
            d = self.digits_of(code)
            if all(_ppow(d, (Q - 1) // ell, self.modulus, p) != one for ell in primes):
                return code
        raise RuntimeError("no primitive element found")

    def _build_tables(self) -> None:
        p, N, Q = self.p, self.N, self.order
        self.powers = p ** np.arange(N, dtype=np.int64)
        codes = np.arange(Q, dtype=np.int64)
        self.digit_table = (codes[:, None] // self.powers[None, :]) % p
        self.primitive = self._find_primitive()

        exp = np.zeros(Q - 1, dtype=np.int64)
        exp[0] = 1
        filled = 1
        gp = self.digits_of(self.primitive)
        while filled < Q - 1:
            m = min(filled, Q - 1 - filled)
            M = self._mult_matrix(gp)
            new = (self.digit_table[exp[:m]] @ M.T) % p
            exp[filled:filled + m] = new @ self.powers
            filled += m
            gp = _pmulmod(gp, gp, self.modulus, p)
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise RuntimeError("exp table is not a permutation of the nonzero elements")
        self.exp_table = exp
        self.log_table = log
        self._exp = exp.tolist()
        self._log = log.tolist()
        neg = ((-self.digit_table) % p) @ self.powers
        self.neg_table = neg
        self._neg = neg.tolist()
        if p != 2:
            one_plus = ((self.digit_table[exp] + self.digit_table[1]) % p) @ self.powers
            self._zech = log[one_plus].tolist()

    def _build_levels(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
        polys = []
        gens = []
        for lo, hi in zip(self.degrees, self.degrees[1:]):
            m = hi // lo
            K = self.subfield_elements(lo)
            S = self.subfield_elements(hi)
            found = None
            for idx in itertools.product(range(len(K)), repeat=m):
                high_first = [int(K[i]) for i in idx]
                val = np.ones_like(S)
                for c in high_first:
                    val = self.vadd(self.vmul(val, S), np.full_like(S, c))
                roots = S[val == 0]
                for root in roots.tolist():
                    if self.element_degree(root, lo) == m:
                        found = (tuple(reversed(high_first)) + (1,), root)
                        break
                if found:
                    break
            if found is None:
                raise RuntimeError(f"no irreducible of degree {m} over F_{self.p}^{lo}")
            polys.append(found[0])
            gens.append(found[1])
        return tuple(polys), tuple(gens)

    # ------------------------------------------------------------------
    # identity and serialisation
    # ------------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldTower) and (self.p, self.degrees) == (other.p, other.degrees)

    def __hash__(self):
        return hash((self.p, self.degrees))

    def __repr__(self):
        return f"FieldTower(p={self.p}, degrees={list(self.degrees)})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "degrees": list(self.degrees),
            "modulus": list(self.modulus),
            "defining_polynomials": [list(f) for f in self.defining_polynomials],
        }

    @staticmethod
    def from_json(record: dict, *, allow_large: bool = False) -> "FieldTower":
        tower = build_tower(int(record["p"]), tuple(record["degrees"]), allow_large=allow_large)
        if "modulus" in record and tuple(record["modulus"]) != tower.modulus:
            raise ValueError("tower record has a different modulus than this library builds")
        if "defining_polynomials" in record:
            given = tuple(tuple(f) for f in record["defining_polynomials"])
            if given != tower.defining_polynomials:
                raise ValueError("tower record has different defining polynomials")
        return tower

    # ------------------------------------------------------------------
    # codes and digits
    # ------------------------------------------------------------------
    def digits_of(self, a: int) -> list[int]:
        return [(a // self.p**j) % self.p for j in range(self.N)]

    def from_digits(self, digits: Iterable[int]) -> int:
        out = 0
        for j, c in enumerate(digits):
            out += (int(c) % self.p) * self.p**j
        if out >= self.order:
            raise ValueError("too many digits for this field")
        return out

    def element(self, value) -> "FieldElement":
        """Wrap a code (int) or a coefficient list as a :class:`FieldElement`."""
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_digits(value))
        return FieldElement(self, int(value))

    @property
    def x(self) -> int:
        """Code of the class of x (the flat generator)."""
        return self.p if self.N > 1 else 0

    # ------------------------------------------------------------------
    # scalar arithmetic on codes
    # ------------------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.order - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.order - 1)]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int, times: int = 1) -> int:
        """a^{p^times}."""
        return self.pow(a, self.p**times)

    def scalar(self, c: int) -> int:
        """Code of the prime-field element c mod p."""
        return c % self.p

    def sum(self, items: Iterable[int]) -> int:
        out = 0
        for a in items:
            out = self.add(out, a)
        return out

    # ------------------------------------------------------------------
    # vectorised arithmetic on code arrays
    # ------------------------------------------------------------------
    def vadd(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.p == 2:
            return A ^ B
        return ((self.digit_table[A] + self.digit_table[B]) % self.p) @ self.powers

    def vneg(self, A) -> np.ndarray:
        return self.neg_table[np.asarray(A, dtype=np.int64)]

    def vsub(self, A, B) -> np.ndarray:
        return self.vadd(A, self.vneg(B))

    def vmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = self.exp_table[(self.log_table[A] + self.log_table[B]) % (self.order - 1)]
        return np.where((A == 0) | (B == 0), 0, out)

    def vinv(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        if (A == 0).any():
            raise ZeroDivisionError("zero has no inverse")
        return self.exp_table[(-self.log_table[A]) % (self.order - 1)]

    def digits(self, A) -> np.ndarray:
        """Coefficient digits of a code array; adds a trailing axis of length N."""
        return self.digit_table[np.asarray(A, dtype=np.int64)]

    def codes(self, D) -> np.ndarray:
        """Inverse of :meth:`digits` along the last axis."""
        return (np.asarray(D, dtype=np.int64) % self.p) @ self.powers

    # ------------------------------------------------------------------
    # subfields
    # ------------------------------------------------------------------
    def _check_degree(self, m: int) -> None:
        if m < 1 or self.N % m:
            raise ValueError(f"degree {m} does not divide the top degree {self.N}")

    def subfield_size(self, m: int) -> int:
        self._check_degree(m)
        return self.p**m

    def subfield_elements(self, m: int) -> np.ndarray:
        """Sorted codes of F_{p^m} inside the top field."""
        self._check_degree(m)
        step = (self.order - 1) // (self.p**m - 1)
        nz = self.exp_table[np.arange(0, self.order - 1, step)]
        return np.sort(np.concatenate([[0], nz]))

    def in_subfield(self, a: int, m: int) -> bool:
        self._check_degree(m)
        if a == 0:
            return True
        return self._log[a] % ((self.order - 1) // (self.p**m - 1)) == 0

    def subfield_primitive(self, m: int) -> int:
        """The generator g^{(Q-1)/(p^m-1)} of F_{p^m}^*; it has degree m over F_p."""
        self._check_degree(m)
        return self._exp[(self.order - 1) // (self.p**m - 1) % (self.order - 1)]

    def subfield_basis(self, m: int) -> list[int]:
        """Power basis 1, γ, ..., γ^{m-1} of F_{p^m} over F_p."""
        g = self.subfield_primitive(m)
        return [self.pow(g, i) for i in range(m)]

    def element_degree(self, a: int, base: int = 1) -> int:
        """Degree of ``a`` over F_{p^base}: smallest t with a in F_{p^{base·t}}."""
        self._check_degree(base)
        for m in range(base, self.N + 1, base):
            if self.N % m == 0 and self.in_subfield(a, m):
                return m // base
        raise AssertionError("unreachable: every element lies in the top field")

    # ------------------------------------------------------------------
    # levels and embeddings
    # ------------------------------------------------------------------
    def level_index(self, degree: int) -> int:
        if degree not in self.degrees:
            raise ValueError(f"{degree} is not a level of {self!r}")
        return self.degrees.index(degree)

    def to_level_coordinates(self, a: int, level: int) -> list[int]:
        """Coordinates of ``a`` in the power basis of level ``level`` over the level below."""
        if level < 1:
            raise ValueError("level 0 is the prime field")
        lo, hi = self.degrees[level - 1], self.degrees[level]
        if not self.in_subfield(a, hi):
            raise ValueError("element does not lie in this level")
        theta = self.level_generators[level - 1]
        gamma = self.subfield_basis(lo)
        m = hi // lo
        cols = []
        for j in range(m):
            tj = self.pow(theta, j)
            for g in gamma:
                cols.append(self.digits_of(self.mul(g, tj)))
        A = np.array(cols, dtype=np.int64).T
        aug = np.hstack([A, np.array(self.digits_of(a), dtype=np.int64)[:, None]])
        R, piv = gfp.rref(aug, self.p)
        if A.shape[1] in piv:
            raise ArithmeticError("level basis does not span the level")
        sol = np.zeros(A.shape[1], dtype=np.int64)
        for i, c in enumerate(piv):
            sol[c] = R[i, -1]
        out = []
        for j in range(m):
            out.append(self.sum(self.mul(int(sol[j * lo + l]), gamma[l]) for l in range(lo)))
        return out

    def from_level_coordinates(self, coeffs: Sequence[int], level: int) -> int:
        lo = self.degrees[level - 1]
        theta = self.level_generators[level - 1]
        out = 0
        for j, c in enumerate(coeffs):
            if not self.in_subfield(c, lo):
                raise ValueError("coordinate outside the level below")
            out = self.add(out, self.mul(c, self.pow(theta, j)))
        return out

    def embed(self, a: int, from_degree: int, to_degree: int) -> int:
        """Embedding F_{p^from} → F_{p^to}; the identity on codes after a membership check."""
        if to_degree % from_degree:
            raise ValueError("target degree is not a multiple of the source degree")
        self._check_degree(to_degree)
        if not self.in_subfield(a, from_degree):
            raise ValueError("element not in the source field")
        return a

    # ------------------------------------------------------------------
    # trace
    # ------------------------------------------------------------------
    def trace_code(self, a: int, target: int, source: int | None = None) -> int:
        source = self.N if source is None else source
        self._check_degree(source)
        if source % target:
            raise ValueError(f"target degree {target} does not divide {source}")
        if not self.in_subfield(a, source):
            raise ValueError("element is not in the source field")
        out = 0
        for i in range(source // target):
            out = self.add(out, self.frobenius(a, target * i))
        return out

    @property
    def absolute_trace_vector(self) -> np.ndarray:
        """t[j] = Tr_{p^N/p}(x^j); the absolute trace of a is digits(a)·t mod p."""
        if not hasattr(self, "_trace_vec"):
            self._trace_vec = np.array(
                [self.trace_code(self.pow(self.x, j) if self.N > 1 else 1, 1) for j in range(self.N)],
                dtype=np.int64,
            )
        return self._trace_vec


@lru_cache(maxsize=None)
def build_tower(p: int, degrees: tuple[int, ...], allow_large: bool = False) -> FieldTower:
    """Cached :class:`FieldTower` constructor."""
    return FieldTower(p, tuple(degrees), allow_large=allow_large)


def prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p^e; raises for non prime powers."""
    f = sympy.factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = f.items()
    return int(p), int(e)


def tower_for(q: int, *exponents: int, allow_large: bool = False) -> tuple[FieldTower, int]:
    """Tower containing F_q ⊆ F_{q^{a}} ⊆ ... for the given relative exponents.

    ``tower_for(4, 2)`` builds F_2 ⊆ F_4 ⊆ F_16 and returns it with the
    absolute degree 2 of F_q.
    """
    p, e = prime_power(q)
    degrees = {1, e}
    for x in exponents:
        degrees.add(e * x)
    return build_tower(p, tuple(sorted(degrees)), allow_large), e


@dataclass(frozen=True)
class FieldElement:
    """An element of the top field of ``tower``, identified by its code."""

    tower: FieldTower
    code: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise ValueError("elements of different towers")
            return other.code
        return self.tower.scalar(int(other))

    def __add__(self, other):
        return FieldElement(self.tower, self.tower.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.tower, self.tower.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.tower, self.tower.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElement(self.tower, self.tower.neg(self.code))

    def __mul__(self, other):
        return FieldElement(self.tower, self.tower.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.tower, self.tower.div(self.code, self._other(other)))

    def __pow__(self, e: int):
        return FieldElement(self.tower, self.tower.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.tower, self.tower.inv(self.code))

    def __bool__(self):
        return self.code != 0

    @property
    def coeffs(self) -> list[int]:
        return self.tower.digits_of(self.code)

    def degree(self, base: int = 1) -> int:
        return self.tower.element_degree(self.code, base)

    def __repr__(self):
        return f"FieldElement({self.code})"


# ----------------------------------------------------------------------
# matrices over the top field (small, scalar arithmetic)
# ----------------------------------------------------------------------
def field_rref(tower: FieldTower, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """RREF over the top field; returns nonzero rows and pivot columns."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = tower.inv(A[r][c])
        A[r] = [tower.mul(inv, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [tower.sub(x, tower.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def field_rank(tower: FieldTower, rows) -> int:
    return len(field_rref(tower, rows)[1])


def field_inverse(tower: FieldTower, M: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R, piv = field_rref(tower, aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


# ----------------------------------------------------------------------
# F_p-subspaces of the top field
# ----------------------------------------------------------------------
class FieldSubspace:
    """An F_p-subspace of the top field, kept as an RREF basis of digit vectors."""

    def __init__(self, tower: FieldTower, fp_rows: np.ndarray):
        R, piv = gfp.rref(np.asarray(fp_rows, dtype=np.int64).reshape(-1, tower.N), tower.p)
        self.tower = tower
        self.rows = R
        self.pivots = piv

    @classmethod
    def span(cls, tower: FieldTower, elements: Iterable[int], over_degree: int = 1) -> "FieldSubspace":
        """F_{p^over}-span of ``elements``."""
        basis = tower.subfield_basis(over_degree)
        rows = [tower.digits_of(tower.mul(int(a), g)) for a in elements for g in basis]
        return cls(tower, np.array(rows, dtype=np.int64).reshape(-1, tower.N))

    @property
    def fp_dim(self) -> int:
        return self.rows.shape[0]

    def dim(self, over_degree: int = 1) -> int:
        if self.fp_dim % over_degree:
            raise ValueError("subspace is not a vector space over that subfield")
        return self.fp_dim // over_degree

    def basis_codes(self) -> list[int]:
        return [int(c) for c in self.tower.codes(self.rows)] if self.fp_dim else []

    def contains(self, a: int) -> bool:
        return gfp.row_space_contains(self.rows, self.pivots, self.tower.digits_of(a), self.tower.p)

    def is_closed_under(self, degree: int) -> bool:
        g = self.tower.subfield_primitive(degree)
        return all(self.contains(self.tower.mul(g, b)) for b in self.basis_codes())

    def elements(self) -> list[int]:
        if self.fp_dim == 0:
            return [0]
        coeffs = np.array(list(itertools.product(range(self.tower.p), repeat=self.fp_dim)), dtype=np.int64)
        return sorted(int(c) for c in self.tower.codes((coeffs @ self.rows) % self.tower.p))

    def __eq__(self, other):
        return (
            isinstance(other, FieldSubspace)
            and self.tower == other.tower
            and np.array_equal(self.rows, other.rows)
        )

    def __repr__(self):
        return f"FieldSubspace(fp_dim={self.fp_dim}, basis={self.basis_codes()})"


# ----------------------------------------------------------------------
# trace forms, minimal polynomials, dual bases
# ----------------------------------------------------------------------
def trace(a: FieldElement, target_degree: int, source_degree: int | None = None) -> FieldElement:
    """Tr_{p^source/p^target}(a) = Σ_i a^{p^{target·i}}.

    ``source_degree`` defaults to the top of the tower.
    """
    return FieldElement(a.tower, a.tower.trace_code(a.code, target_degree, source_degree))


def minimal_poly_and_degree(a: FieldElement, base_degree: int) -> tuple[tuple[FieldElement, ...], int]:
    """Minimal polynomial of ``a`` over F_{p^base}, low degree first, and its degree."""
    tower = a.tower
    tower._check_degree(base_degree)
    conj = [a.code]
    while True:
        nxt = tower.frobenius(conj[-1], base_degree)
        if nxt == a.code:
            break
        conj.append(nxt)
    poly = [1]
    for c in conj:
        shifted = [0] + poly
        scaled = [tower.mul(tower.neg(c), x) for x in poly] + [0]
        poly = [tower.add(u, v) for u, v in zip(shifted, scaled)]
    if not all(tower.in_subfield(x, base_degree) for x in poly):
        raise ArithmeticError("minimal polynomial escaped the base field")
    return tuple(FieldElement(tower, x) for x in poly), len(conj)


def trace_gram(basis: Sequence[FieldElement], base_degree: int, source_degree: int | None = None) -> list[list[int]]:
    tower = basis[0].tower
    return [
        [tower.trace_code(tower.mul(u.code, v.code), base_degree, source_degree) for v in basis]
        for u in basis
    ]


def dual_basis(
    basis: Sequence[FieldElement], base_degree: int, source_degree: int | None = None
) -> list[FieldElement]:
    """Trace-dual basis by inverting the Gram matrix of the trace form.

    The dual element ξ*_j = Σ_k (G^{-1})_{kj} ξ_k satisfies Tr(ξ_i ξ*_j) = δ_ij.
    """
    tower = basis[0].tower
    source = tower.N if source_degree is None else source_degree
    if len(basis) * base_degree != source:
        raise ValueError("wrong number of elements for a basis")
    G = trace_gram(basis, base_degree, source)
    try:
        C = field_inverse(tower, G)
    except ValueError as exc:
        raise ValueError("elements do not form a basis") from exc
    out = []
    for j in range(len(basis)):
        out.append(FieldElement(tower, tower.sum(tower.mul(C[k][j], basis[k].code) for k in range(len(basis)))))
    return out


def dual_basis_power(lam: FieldElement, base_degree: int) -> list[FieldElement]:
    """Closed-form dual of the power basis (1, λ, ..., λ^{n-1}).

    With f = a_0 + ... + a_{n-1}x^{n-1} + x^n the minimal polynomial of λ,
    δ = f'(λ) and γ_i = Σ_{j=1}^{n-i} λ^{j-1} a_{i+j}, the dual basis is
    (γ_0/δ, ..., γ_{n-1}/δ).
    """
    tower = lam.tower
    f, n = minimal_poly_and_degree(lam, base_degree)
    if n * base_degree != tower.N:
        raise ValueError("λ does not generate the top field over the base field")
    a = [c.code for c in f]
    # f'(λ) = Σ_{i≥1} i a_i λ^{i-1}
    delta = 0
    for i in range(1, n + 1):
        term = tower.mul(tower.scalar(i), tower.mul(a[i], tower.pow(lam.code, i - 1)))
        delta = tower.add(delta, term)
    if delta == 0:
        raise ArithmeticError("f'(λ) vanished; f is not separable")
    dinv = tower.inv(delta)
    out = []
    for i in range(n):
        gamma = 0
        for j in range(1, n - i + 1):
            gamma = tower.add(gamma, tower.mul(tower.pow(lam.code, j - 1), a[i + j]))
        out.append(FieldElement(tower, tower.mul(dinv, gamma)))
    return out


def orthogonal_complement(S: FieldSubspace) -> FieldSubspace:
    """S^⊥ = {a : Tr(ab) = 0 for all b in S} in the top field.

    For S closed under some subfield F_q, vanishing of Tr_{top/q}(ab) on S is
    equivalent to vanishing of the absolute trace on S, so the complement is
    computed over F_p with the absolute trace form.
    """
    tower = S.tower
    tvec = tower.absolute_trace_vector
    if S.fp_dim == 0:
        return FieldSubspace(tower, np.eye(tower.N, dtype=np.int64))
    xs = [tower.pow(tower.x, j) if tower.N > 1 else 1 for j in range(tower.N)]
    M = np.array(
        [[(np.array(tower.digits_of(tower.mul(xj, b))) @ tvec) % tower.p for xj in xs] for b in S.basis_codes()],
        dtype=np.int64,
    )
    return FieldSubspace(tower, gfp.nullspace(M, tower.p).reshape(-1, tower.N))
