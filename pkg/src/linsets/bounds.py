"""Lower bounds on linear-set sizes and the classification of sets meeting them.

The central inequality: if L_U (rank k) meets an (r-1)-space Ω in a
canonical subgeometry and r < k, then

    |L_U| ≥ q^{k-1} + ... + q^{k-r} + I_Ω,

with I_Ω the number of r-spaces through Ω that contain a point of L_U off Ω.
For n prime with n ≤ q and L_U spanning PG(d, q^n), choosing
r = d - ⌊(k-(d+2))/(n-1)⌋ gives the closed form

    |L_U| ≥ q^{k-1} + ... + q^{k-r} + (q^{n(d-r+1)} - 1)/(q^n - 1).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
import sympy

from .errors import HypothesisError, InternalInconsistency, TheoremViolation
from .fields import field_rref
from .linset import FqSubspace, LinearSetReport, report
from .projgeo import ProjSubspace, QuotientMap, count_I_Omega, is_canonical_subgeometry, project, quotient_normalized, subspace_weight

DEFAULT_SEARCH_BUDGET = 20_000


def geometric_sum(q: int, k: int, r: int) -> int:
    """q^{k-1} + ... + q^{k-r}."""
    return sum(q ** (k - i) for i in range(1, r + 1))


def d_minimum_value(q: int, k: int, d: int) -> int:
    return geometric_sum(q, k, d) + 1


def thm16_r(k: int, d: int, n: int) -> int:
    return d - (k - (d + 2)) // (n - 1)


def thm16_bound(q: int, n: int, d: int, k: int) -> tuple[int, int]:
    """(r, bound) for the prime-degree bound."""
    r = thm16_r(k, d, n)
    tail = (q ** (n * (d - r + 1)) - 1) // (q**n - 1)
    return r, geometric_sum(q, k, r) + tail


@dataclass
class BoundCertificate:
    kind: str
    q: int
    n: int
    d: int
    k: int
    r: int
    omega: list | None
    I_omega: int | None
    bound: int
    size: int
    note: str = ""

    @property
    def slack(self) -> int:
        return self.size - self.bound

    @property
    def equality(self) -> bool:
        return self.slack == 0

    @property
    def holds(self) -> bool:
        return self.slack >= 0

    def to_json(self) -> dict:
        out = asdict(self)
        out.update(slack=self.slack, equality=self.equality)
        return out


# ----------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------
def spans_space(tower, pts: np.ndarray, d: int) -> bool:
    """Do the given points span PG(d)?  Greedy with early exit."""
    rows: list[list[int]] = []
    for P in np.asarray(pts).tolist():
        R, _ = field_rref(tower, rows + [P])
        if len(R) > len(rows):
            rows = R
            if len(rows) == d + 1:
                return True
    return len(rows) == d + 1


def spans(U: FqSubspace) -> bool:
    """Does L_U span PG(d, q^n)?  Uses the generators, not the points."""
    return len(field_rref(U.tower, [list(g) for g in U.generators])[1]) == U.d + 1


@dataclass
class CanonicalSearch:
    spaces: list[ProjSubspace]
    exhausted_budget: bool
    checks: int


def iter_canonical_spaces(U: FqSubspace, r: int, rep: LinearSetReport | None = None, *,
                          budget: int = DEFAULT_SEARCH_BUDGET, stats: dict | None = None):
    """Yield the (r-1)-spaces meeting L_U in a canonical subgeometry.

    Depth-first over weight-1 points in canonical order.  Every independent
    subset of a canonical subgeometry spans a canonical subgeometry, so
    growing spans one point at a time and pruning non-canonical prefixes
    loses nothing.  ``budget`` bounds the number of canonical tests; the
    count and whether it ran out are left in ``stats``.
    """
    rep = report(U) if rep is None else rep
    T = U.tower
    w1 = rep.points_of_weight(1).tolist()
    seen: set[bytes] = set()
    stats = {} if stats is None else stats
    stats.update(checks=0, exhausted=False)
    if r <= 0:
        return

    def dfs(rows: list[list[int]], start: int):
        if len(rows) == r:
            yield ProjSubspace(T, rows)
            return
        for i in range(start, len(w1)):
            R, _ = field_rref(T, rows + [w1[i]])
            if len(R) == len(rows):
                continue
            key = np.array(R, dtype=np.int64).tobytes()
            if key in seen:
                continue
            seen.add(key)
            if len(R) > 1:  # a weight-1 point is a canonical 0-space already
                stats["checks"] += 1
                if stats["checks"] > budget:
                    stats["exhausted"] = True
                    return
                if not is_canonical_subgeometry(U, ProjSubspace(T, R)):
                    continue
            yield from dfs(R, i + 1)
            if stats["exhausted"]:
                return

    yield from dfs([], 0)


def canonical_spaces(U: FqSubspace, r: int, rep: LinearSetReport | None = None, *,
                     budget: int = DEFAULT_SEARCH_BUDGET, first_only: bool = False) -> CanonicalSearch:
    """All (or the first) canonical (r-1)-spaces, see :func:`iter_canonical_spaces`."""
    stats: dict = {}
    found = []
    for W in iter_canonical_spaces(U, r, rep, budget=budget, stats=stats):
        found.append(W)
        if first_only:
            break
    return CanonicalSearch(found, stats.get("exhausted", False), stats.get("checks", 0))


# ----------------------------------------------------------------------
# theorem checks
# ----------------------------------------------------------------------
def verify_thm14(U: FqSubspace, omega: ProjSubspace, rep: LinearSetReport | None = None) -> BoundCertificate:
    """Certificate for the canonical-section bound at ``omega``."""
    rep = report(U) if rep is None else rep
    r = omega.rank
    if r >= U.k:
        raise HypothesisError(f"need r < k, got r={r}, k={U.k}")
    if not is_canonical_subgeometry(U, omega):
        raise HypothesisError("L_U does not meet Ω in a canonical subgeometry")
    I = count_I_Omega(U, omega, points=rep.points)
    cert = BoundCertificate(
        "thm14", U.q, U.n, U.d, U.k, r, omega.basis.tolist(), I, geometric_sum(U.q, U.k, r) + I, rep.size
    )
    if not cert.holds:
        raise TheoremViolation(f"size {cert.size} below bound {cert.bound}")
    return cert


def thm16_gate(q: int, n: int) -> str | None:
    """Reason the prime-degree bound does not apply, or None."""
    if not sympy.isprime(n):
        return f"n = {n} is not prime"
    if n > q:
        return f"n = {n} exceeds q = {q} (the bound is stated for n <= q)"
    return None


def verify_thm16(U: FqSubspace, *, override_gate: bool = False, rep: LinearSetReport | None = None,
                 budget: int = DEFAULT_SEARCH_BUDGET) -> BoundCertificate:
    """Check the prime-degree bound and find the canonical (r-1)-space it promises."""
    reason = thm16_gate(U.q, U.n)
    if reason and not override_gate:
        raise HypothesisError(f"prime-degree bound refused: {reason}")
    if not spans(U):
        raise HypothesisError("L_U does not span the ambient space")
    rep = report(U) if rep is None else rep
    r, bound = thm16_bound(U.q, U.n, U.d, U.k)
    omega = None
    note = "gate overridden" if reason else ""
    if r >= 1:
        search = canonical_spaces(U, r, rep, budget=budget, first_only=True)
        if not search.spaces:
            status = "budget exhausted" if search.exhausted_budget else "search complete"
            msg = f"no canonical {r - 1}-space found ({status})"
            if override_gate:
                note = (note + "; " + msg).strip("; ")
            else:
                raise TheoremViolation(msg)
        else:
            omega = search.spaces[0].basis.tolist()
    cert = BoundCertificate("thm16", U.q, U.n, U.d, U.k, r, omega, None, bound, rep.size, note)
    if not cert.holds and not override_gate:
        raise TheoremViolation(f"size {cert.size} below bound {cert.bound}")
    return cert


@dataclass
class MinSizeClass:
    d_minimum: bool
    d_minimum_value: int
    rd_minimum: dict[int, list | None] = field(default_factory=dict)
    exhausted: dict[int, bool] = field(default_factory=dict)

    @property
    def proper_d_minimum(self) -> bool:
        return self.rd_minimum.get(self._d) is not None

    _d: int = 0

    def is_rd_minimum(self, r: int) -> bool:
        return self.rd_minimum.get(r) is not None

    def label(self) -> str:
        rs = [r for r in sorted(self.rd_minimum) if self.rd_minimum[r] is not None]
        parts = []
        if self.d_minimum:
            parts.append("d-minimum")
        if rs:
            parts.append(f"({max(rs)},{self._d})-minimum")
        if self.proper_d_minimum:
            parts.append("proper")
        return "+".join(parts) if parts else "none"

    def to_json(self) -> dict:
        return {
            "d_minimum": self.d_minimum,
            "d_minimum_value": self.d_minimum_value,
            "rd_minimum": {str(r): w for r, w in self.rd_minimum.items()},
            "search_exhausted": {str(r): v for r, v in self.exhausted.items()},
            "proper_d_minimum": self.proper_d_minimum,
        }


def classify_minimum(U: FqSubspace, rep: LinearSetReport | None = None, *, rs=None,
                     budget: int = DEFAULT_SEARCH_BUDGET) -> MinSizeClass:
    """Which minimum-size classes L_U belongs to.

    For each r in ``rs`` (default 1..min(d, k-1)) canonical (r-1)-spaces are
    scanned in canonical order until one gives equality with size not above
    the d-minimum value; that Ω is recorded as the witness.
    """
    rep = report(U) if rep is None else rep
    q, k, d = U.q, U.k, U.d
    dval = d_minimum_value(q, k, d)
    out = MinSizeClass(rep.size == dval, dval, _d=d)
    if rs is None:
        rs = range(1, min(d, k - 1) + 1)
    for r in rs:
        out.rd_minimum[r] = None
        if rep.size > dval:
            out.exhausted[r] = False
            continue
        stats: dict = {}
        for W in iter_canonical_spaces(U, r, rep, budget=budget, stats=stats):
            I = count_I_Omega(U, W, points=rep.points)
            if rep.size == geometric_sum(q, k, r) + I:
                out.rd_minimum[r] = W.basis.tolist()
                break
        out.exhausted[r] = stats["exhausted"]
    return out


def rank_from_size(size: int, m: int, q: int) -> int:
    """Rank from size and minimum weight: ⌊log_q size⌋ + m, window-checked."""
    if size < 2:
        raise ValueError("need more than one point")
    e, _ = sympy.integer_log(size, q)
    k = int(e) + m
    if not (q ** (k - m) + 1 <= size <= (q**k - 1) // (q**m - 1)):
        raise ValueError(f"size {size} with minimum weight {m} fits no rank over F_{q}")
    return k


def min_weight_span_check(U: FqSubspace, rep: LinearSetReport | None = None) -> bool:
    """Points of minimum weight of a spanning L_U span the space."""
    if not spans(U):
        raise HypothesisError("L_U does not span the ambient space")
    rep = report(U) if rep is None else rep
    m = rep.spectrum[0]
    if not spans_space(U.tower, rep.points_of_weight(m), U.d):
        raise TheoremViolation("points of minimum weight do not span")
    return True


def hyperplane_from_flag(U: FqSubspace, omega: ProjSubspace, omega_prime: ProjSubspace) -> ProjSubspace:
    """Hyperplane meeting L_U canonically, built from the flag Ω' ⊂ Ω.

    Hypotheses: Ω an r-space with r < d and weight k', rank(U) = k' + d - r,
    Ω' an (r-1)-space of Ω meeting L_U canonically, L_U spanning.  Project
    from Ω', complete the image P_0 of Ω to a spanning set of points
    P_1..P_{d-r} of the projection, and lift their span back.
    """
    T = U.tower
    r = omega.rank - 1
    if omega_prime.rank != r:
        raise HypothesisError("Ω' must have one dimension less than Ω")
    if r >= U.d:
        raise HypothesisError("need r < d")
    if ProjSubspace(T, np.vstack([omega.basis, omega_prime.basis]).tolist()) != omega:
        raise HypothesisError("Ω' is not contained in Ω")
    kp = subspace_weight(U, omega.basis)
    if U.k != kp + U.d - r:
        raise HypothesisError(f"rank {U.k} differs from w(Ω) + d - r = {kp + U.d - r}")
    if not spans(U):
        raise HypothesisError("L_U does not span the ambient space")
    if not is_canonical_subgeometry(U, omega_prime):
        raise HypothesisError("Ω' does not meet L_U canonically")

    Qm = QuotientMap(omega_prime)
    Ubar = project(U, omega_prime)
    imgs = quotient_normalized(omega_prime, omega.basis)
    P0 = next(v for v in imgs.tolist() if any(v))
    from .linset import enumerate_points

    chosen = [P0]
    for P in enumerate_points(Ubar).tolist():
        R, _ = field_rref(T, chosen + [P])
        if len(R) > len(chosen):
            chosen.append(P)
            if len(chosen) == U.d - r + 1:
                break
    if len(chosen) != U.d - r + 1:
        raise TheoremViolation("projection does not span the quotient")
    lifts = []
    for P in chosen[1:]:
        v = [0] * (U.d + 1)
        for c, a in zip(Qm.free, P):
            v[c] = a
        lifts.append(v)
    Pi = ProjSubspace(T, omega_prime.basis.tolist() + lifts)
    if Pi.rank != U.d:
        raise InternalInconsistency("lifted span is not a hyperplane")
    if not is_canonical_subgeometry(U, Pi):
        raise TheoremViolation("constructed hyperplane does not meet L_U canonically")
    return Pi
