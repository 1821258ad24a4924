"""Explicit families of linear sets, each paired with its predicted invariants.

Every builder returns a :class:`Build`: the subspace U, a :class:`Prediction`
assembled from closed formulas, the enumerated report, and a verdict that
compares the two.  A mismatch raises :class:`TheoremViolation`.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .bounds import classify_minimum, d_minimum_value, geometric_sum, thm16_r
from .errors import HypothesisError, TheoremViolation
from .fields import FieldSubspace, FieldTower, field_rank, field_rref, tower_for
from .linset import FqSubspace, LinearSetReport, report, span_fq, weight
from .polynomials import Poly, gcd_monic
from .projgeo import ProjSubspace, is_canonical_subgeometry, section_points


@dataclass
class Prediction:
    rank: int
    size: int
    weights: dict[str, tuple[tuple[int, ...], int]] = field(default_factory=dict)
    N: list[int] | None = None
    N_partial: dict[int, int] = field(default_factory=dict)
    spectrum: list[int] | None = None
    claims: dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["weights"] = {k: {"point": list(p), "weight": w} for k, (p, w) in self.weights.items()}
        out["N_partial"] = {str(i): v for i, v in self.N_partial.items()}
        return out


@dataclass
class Build:
    name: str
    params: dict
    U: FqSubspace
    prediction: Prediction
    report: LinearSetReport
    verdict: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.verdict.values())

    def to_json(self) -> dict:
        return {
            "construction": self.name,
            "params": self.params,
            "prediction": self.prediction.to_json(),
            "report": self.report.to_json(),
            "verdict": self.verdict,
            "subspace": self.U.to_json(),
        }


def check_prediction(U: FqSubspace, pred: Prediction, rep: LinearSetReport, *, strict: bool = True) -> dict[str, bool]:
    """Compare every predicted quantity with the enumerated one."""
    v = {"rank": pred.rank == U.k, "size": pred.size == rep.size}
    for label, (pt, w) in pred.weights.items():
        v[f"weight {label}"] = weight(U, pt) == w
    if pred.N is not None:
        padded = list(pred.N) + [0] * (len(rep.N) - len(pred.N))
        v["N"] = padded == rep.N
    for i, val in pred.N_partial.items():
        v[f"N_{i}"] = rep.N[i - 1] == val
    if pred.spectrum is not None:
        v["spectrum"] = list(pred.spectrum) == rep.spectrum
    if strict and not all(v.values()):
        bad = [k for k, ok in v.items() if not ok]
        raise TheoremViolation(f"prediction mismatch: {bad}")
    return v


def _finish(name, params, U, pred, rep=None, strict=True) -> Build:
    rep = report(U) if rep is None else rep
    return Build(name, params, U, pred, rep, check_prediction(U, pred, rep, strict=strict))


def unit_vector(d: int, i: int, value: int = 1) -> tuple[int, ...]:
    v = [0] * (d + 1)
    v[i] = value
    return tuple(v)


# ----------------------------------------------------------------------
# λ-power products
# ----------------------------------------------------------------------
@dataclass
class JVParams:
    """Product of F_q-spans ⟨1, λ, ..., λ^{k_i-1}⟩ inside F_{q^n}^{d+1}."""

    q: int
    n: int
    t: int
    ks: tuple[int, ...]
    lam: int | None = None

    def __post_init__(self):
        self.ks = tuple(int(k) for k in self.ks)
        if len(self.ks) < 2:
            raise HypothesisError("need at least two coordinates (d >= 1)")
        if any(a < b for a, b in zip(self.ks, self.ks[1:])) or self.ks[-1] < 1:
            raise HypothesisError("need k_0 >= k_1 >= ... >= k_d >= 1")
        if self.t < 2 or self.n % self.t:
            raise HypothesisError("need t > 1 dividing n")
        if self.ks[0] + self.ks[1] > self.t + 1:
            raise HypothesisError("need k_0 + k_1 <= t + 1")
        self.tower, self.e = tower_for(self.q, self.t, self.n)
        if self.lam is None:
            self.lam = self.tower.subfield_primitive(self.e * self.t)
        if self.tower.element_degree(self.lam, self.e) != self.t:
            raise HypothesisError(f"λ does not have degree {self.t} over F_q")

    @property
    def d(self) -> int:
        return len(self.ks) - 1

    @property
    def k(self) -> int:
        return sum(self.ks)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "t": self.t, "ks": list(self.ks), "lambda": self.lam}


def jv_subspace(p: JVParams) -> FqSubspace:
    T = p.tower
    vecs = [unit_vector(p.d, i, T.pow(p.lam, j)) for i, k in enumerate(p.ks) for j in range(k)]
    return span_fq(T, vecs, p.e)


def jv_prediction(p: JVParams) -> Prediction:
    q, ks, d, k = p.q, p.ks, p.d, p.k
    k0, k1 = ks[0], ks[1]
    pred = Prediction(rank=k, size=d_minimum_value(q, k, d))
    pred.weights["E_0"] = (unit_vector(d, 0), k0)
    pred.spectrum = list(range(1, k0 + 1)) if k1 == k0 else list(range(1, k1 + 1)) + [k0]
    if k1 < k0:
        m = sum(1 for kj in ks[1:] if kj == k1)
        pred.N_partial[k1] = q ** (k0 - k1 + 1) * (q**m - 1) // (q - 1)
        pred.N_partial[k0] = 1
    pred.claims["d_minimum"] = True
    return pred


def jv_build(p: JVParams, *, strict: bool = True) -> Build:
    U = jv_subspace(p)
    return _finish("jv", p.to_json(), U, jv_prediction(p), strict=strict)


def jv_point(p: JVParams, fs: Sequence[Poly]) -> tuple[int, ...]:
    return tuple(f(p.lam) for f in fs)


def jv_point_weight(p: JVParams, fs: Sequence[Poly]) -> int:
    """min_i (k_i - deg f_i) for coordinate polynomials with gcd 1."""
    if len(fs) != p.d + 1:
        raise ValueError("need one polynomial per coordinate")
    nonzero = [f for f in fs if not f.is_zero()]
    if not nonzero:
        raise ValueError("all polynomials are zero")
    g = nonzero[0]
    for f in nonzero[1:]:
        g = gcd_monic(g, f)
    g = g.monic()
    if g.degree != 0:
        raise HypothesisError("coordinate polynomials are not coprime")
    return int(min(k - f.degree for k, f in zip(p.ks, fs) if not f.is_zero()))


def jv_proper_hyperplane(p: JVParams, gs: Sequence[Poly], U: FqSubspace | None = None) -> tuple[ProjSubspace, dict]:
    """Hyperplane G(λ)X_0 = Σ (G/g_i)(λ) X_i with G = g_1...g_d.

    ``gs`` is g_0..g_d or g_1..g_d; all given g_i must be pairwise coprime
    with deg g_i = k_i - 1, and Σ k_i ≤ t + d.
    """
    T, d = p.tower, p.d
    gs = [g.to_tower(T, p.e) for g in gs]
    offset = 0 if len(gs) == d + 1 else 1
    if len(gs) + offset != d + 1:
        raise ValueError("need g_0..g_d or g_1..g_d")
    for j, g in enumerate(gs):
        if g.degree != p.ks[j + offset] - 1:
            raise HypothesisError(f"deg g_{j + offset} must be k_{j + offset} - 1")
    for a, b in itertools.combinations(gs, 2):
        if gcd_monic(a, b).degree != 0:
            raise HypothesisError("polynomials are not pairwise coprime")
    if p.k > p.t + d:
        raise HypothesisError("need k_0 + ... + k_d <= t + d")
    g_rest = gs[1 - offset:]
    G = Poly.one(T, p.e)
    for g in g_rest:
        G = G * g
    coeffs = [G(p.lam)]
    if coeffs[0] == 0:
        raise TheoremViolation("G(λ) vanished although deg G < t")
    for g in g_rest:
        quo, rem = divmod(G, g)
        if not rem.is_zero():
            raise AssertionError("g_i does not divide G")
        coeffs.append(T.neg(quo(p.lam)))
    Pi = ProjSubspace.from_equation(T, coeffs)
    U = jv_subspace(p) if U is None else U
    through = all(
        Pi.contains([1] + [g(p.lam) if j == i else 0 for j, g in enumerate(g_rest)])
        for i in range(d)
    )
    pts = section_points(U, Pi)
    verification = {
        "passes_through_P_i": through,
        "section_size": int(pts.shape[0]),
        "expected_section_size": (p.q**d - 1) // (p.q - 1),
        "canonical": is_canonical_subgeometry(U, Pi),
    }
    return Pi, verification


# ----------------------------------------------------------------------
# lift from F_{q^t} to F_{q^{st}}
# ----------------------------------------------------------------------
def default_Z(tower: FieldTower, e: int, t: int, r: int) -> FieldSubspace:
    """An r-dimensional F_{q^t}-subspace of the top field avoiding 1.

    Scans ξ = g^1, g^2, ... (g the primitive element) and keeps ξ whenever
    it enlarges the span without bringing 1 in.
    """
    Z = FieldSubspace.span(tower, [], e * t)
    chosen: list[int] = []
    for i in range(1, tower.order - 1):
        xi = int(tower.exp_table[i])
        if Z.contains(xi):
            continue
        cand = FieldSubspace.span(tower, chosen + [xi], e * t)
        if cand.contains(1):
            continue
        chosen.append(xi)
        Z = cand
        if Z.dim(e * t) == r:
            return Z
    raise HypothesisError(f"no F_q^t-subspace of dimension {r} avoiding 1")


@dataclass
class CasertaParams:
    q: int
    s: int
    t: int
    Z: FieldSubspace
    U_prime: FqSubspace

    def __post_init__(self):
        if self.s < 2 or self.t < 2:
            raise HypothesisError("need s, t > 1")
        T, e = self.U_prime.tower, self.U_prime.e
        if T.N != e * self.s * self.t or self.q != self.U_prime.q:
            raise HypothesisError("U' does not live in F_{q^{st}}^{d+1}")
        if self.Z.tower != T:
            raise HypothesisError("Z and U' use different towers")
        if not self.Z.is_closed_under(e * self.t):
            raise HypothesisError("Z is not an F_{q^t}-subspace")
        if self.Z.fp_dim == 0:
            raise HypothesisError("Z must be nonzero")
        if self.Z.contains(1):
            raise HypothesisError("1 lies in Z")
        for g in self.U_prime.generators:
            if not all(T.in_subfield(a, e * self.t) for a in g):
                raise HypothesisError("U' is not inside F_{q^t}^{d+1}")

    @property
    def r(self) -> int:
        return self.Z.dim(self.U_prime.e * self.t)

    def to_json(self) -> dict:
        return {"q": self.q, "s": self.s, "t": self.t, "r": self.r, "Z": self.Z.basis_codes(),
                "U_prime": self.U_prime.to_json()}


def caserta_build(p: CasertaParams, *, strict: bool = True, rep_prime: LinearSetReport | None = None) -> Build:
    Up = p.U_prime
    d, q = Up.d, p.q
    rep_p = report(Up) if rep_prime is None else rep_prime
    E0 = unit_vector(d, 0)
    w0 = rep_p.weight_of(E0)
    rt = p.r * p.t
    # Z is F_{q^t}-closed, so its F_p-rows span an F_q-space; take an F_q-basis
    zvecs = [unit_vector(d, 0, z) for z in p.Z.basis_codes()]
    U = span_fq(Up.tower, zvecs + list(Up.generators), Up.e)
    n = U.n
    wE0 = rt + w0
    N = []
    for i in range(1, n + 1):
        Ni_p = rep_p.N[i - 1] if i <= len(rep_p.N) else 0
        N.append(q**rt * (Ni_p - (1 if i == w0 else 0)) + (1 if i == wE0 else 0))
    size_off = rep_p.size - (1 if w0 > 0 else 0)
    pred = Prediction(rank=rt + Up.k, size=q**rt * size_off + 1, N=N)
    pred.weights["E_0"] = (E0, wE0)
    pred.spectrum = [i for i in range(1, n + 1) if N[i - 1]]
    return _finish("caserta", p.to_json(), U, pred, strict=strict)


# ----------------------------------------------------------------------
# prime-degree tightness family
# ----------------------------------------------------------------------
def standard_U1(tower: FieldTower, e: int, n: int, dim: int, k1: int) -> list[tuple[int, ...]]:
    """First k1 vectors of the F_q-basis γ^j e_c of F_{q^n}^{dim}."""
    g = tower.subfield_primitive(e * n)
    basis = [unit_vector(dim - 1, c, tower.pow(g, j)) for c in range(dim) for j in range(n)]
    return basis[:k1]


def prime_build(q: int, n: int, d: int, r: int, k1: int | None = None,
                U1_vectors: Sequence[Sequence[int]] | None = None, *, strict: bool = True) -> Build:
    """U = U_1 × F_q^r with (d-r)n + 2 ≤ dim U_1 ≤ (d-r+1)n."""
    if not 0 <= r <= d:
        raise HypothesisError("need 0 <= r <= d")
    T, e = tower_for(q, n)
    dim1 = d - r + 1
    if U1_vectors is None:
        if k1 is None:
            raise ValueError("give k1 or U1_vectors")
        U1_vectors = standard_U1(T, e, n, dim1, k1)
    U1 = span_fq(T, U1_vectors, e)
    k1 = U1.k
    if not (d - r) * n + 2 <= k1 <= (d - r + 1) * n:
        raise HypothesisError(f"dim U_1 = {k1} outside [{(d - r) * n + 2}, {(d - r + 1) * n}]")
    vecs = [tuple(g) + (0,) * r for g in U1.generators]
    vecs += [unit_vector(d, dim1 + i) for i in range(r)]
    U = span_fq(T, vecs, e)
    k = k1 + r
    size = geometric_sum(q, k, r) + (q ** ((d - r + 1) * n) - 1) // (q**n - 1)
    pred = Prediction(rank=k, size=size)
    pred.claims["r"] = r
    pred.claims["r_formula"] = thm16_r(k, d, n)
    params = {"q": q, "n": n, "d": d, "r": r, "k1": k1}
    b = _finish("prime", params, U, pred, strict=strict)
    b.verdict["r_formula"] = pred.claims["r_formula"] == r
    if strict and not b.verdict["r_formula"]:
        raise TheoremViolation("r formula disagrees with the construction")
    return b


# ----------------------------------------------------------------------
# products U_1 × U_2
# ----------------------------------------------------------------------
def product_build(U1: FqSubspace, U2: FqSubspace, t: int, *, strict: bool = True,
                  rep1: LinearSetReport | None = None, rep2: LinearSetReport | None = None) -> Build:
    """U_1 × U_2 with U_1 an F_{q^t}-subspace and U_2 ⊆ F_{q^t}^{d_2+1} over F_q.

    ``U1`` carries base degree e·t; ``U2`` carries base degree e.
    """
    T, e = U2.tower, U2.e
    if U1.tower != T:
        raise HypothesisError("U_1 and U_2 use different towers")
    if U1.e != e * t:
        raise HypothesisError("U_1 must be given as an F_{q^t}-subspace")
    s, rem = divmod(T.N // e, t)
    if rem or s < 2 or t < 2:
        raise HypothesisError("need n = st with s, t > 1")
    for g in U2.generators:
        if not all(T.in_subfield(a, e * t) for a in g):
            raise HypothesisError("U_2 is not inside F_{q^t}^{d_2+1}")
    q = U2.q
    d1, d2 = U1.d, U2.d
    d = d1 + d2 + 1
    U1q = FqSubspace(T, e, d1, U1.rows)  # same set, viewed over F_q
    rep1 = report(U1q) if rep1 is None else rep1
    rep2 = report(U2) if rep2 is None else rep2
    vecs = [tuple(g) + (0,) * (d2 + 1) for g in U1q.generators]
    vecs += [(0,) * (d1 + 1) + tuple(g) for g in U2.generators]
    U = span_fq(T, vecs, e)
    k1, k2 = U1.k, U2.k
    scale = q ** (k1 * t)
    N = [a + scale * b for a, b in zip(rep1.N, rep2.N)]
    pred = Prediction(rank=k1 * t + k2, size=rep1.size + scale * rep2.size, N=N)
    pred.spectrum = [i for i in range(1, len(N) + 1) if N[i - 1]]
    if k1 <= d1 * s and k2 >= d2 + 2:
        cls2 = classify_minimum(U2, rep2, rs=[d2])
        if cls2.proper_d_minimum:
            pred.claims["rd_minimum"] = [d2, d]
            pred.claims["d_minimum"] = False
    params = {"q": q, "n": T.N // e, "t": t, "d1": d1, "d2": d2, "k1": k1, "k2": k2,
              "U1": U1.to_json(), "U2": U2.to_json()}
    return _finish("product", params, U, pred, strict=strict)


# ----------------------------------------------------------------------
# linear maps
# ----------------------------------------------------------------------
def apply_gl(U: FqSubspace, M: Sequence[Sequence[int]], *, check: bool = True) -> FqSubspace:
    """Image of U under v ↦ M v (M invertible over F_{q^n})."""
    T = U.tower
    M = [list(map(int, row)) for row in M]
    if len(M) != U.d + 1 or field_rank(T, M) != U.d + 1:
        raise ValueError("matrix is singular or has the wrong size")
    img = []
    for v in U.generators:
        img.append(tuple(T.sum(T.mul(M[i][j], v[j]) for j in range(U.d + 1)) for i in range(U.d + 1)))
    V = span_fq(T, img, U.e)
    if check:
        a, b = report(U), report(V)
        if a.rank != b.rank or a.N != b.N:
            raise TheoremViolation("a linear map changed the rank or weight distribution")
    return V


def swap_matrix(d: int, i: int) -> list[list[int]]:
    M = [[1 if a == b else 0 for b in range(d + 1)] for a in range(d + 1)]
    M[0][0] = M[i][i] = 0 if i else 1
    M[0][i] = M[i][0] = 1
    return M
