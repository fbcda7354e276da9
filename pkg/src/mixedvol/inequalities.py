"""Exact verification of the Alexandrov-Fenchel inequality family and of
concavity of f(I) = log V_I on the discrete simplex.

No logarithm is ever evaluated in a verdict path.  A concavity comparison
with rational weights w_J = p_J / q (common denominator q) is decided by
comparing V_I^q against Π_J V_J^{p_J} in exact rational arithmetic; f(I) for
V_I = 0 is treated as negative infinity, which can never win a comparison.
The only floating point in this module is an explicitly non-authoritative
diagnostic attached to the Brunn-Minkowski surrogate check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, lcm
from typing import Sequence

import mpmath

from .bodies import Body, body_dim, minkowski_sum, volume
from .mixed import (
    MultiIndex,
    VolumePolynomial,
    discrete_simplex,
    mixed_discriminant,
    mixed_volume,
)
from .numerics import (
    INFEASIBLE,
    Matrix,
    SymMatrix,
    format_rational,
    is_positive_definite,
    permanent,
    simplex_max,
)

HOLDS = "holds"
FAILS = "fails"
VACUOUS = "vacuous"


class PreconditionError(ValueError):
    """The input violates a hypothesis of the inequality being checked."""


@dataclass(frozen=True)
class LogValue:
    """log v for v > 0, or negative infinity for v = 0 (the log 0 convention)."""

    argument: Fraction | None  # None tags negative infinity

    @classmethod
    def of(cls, v: Fraction) -> "LogValue":
        if v < 0:
            raise ValueError(f"log of a negative value: {v}")
        return cls(argument=None) if v == 0 else cls(argument=v)

    @property
    def is_finite(self) -> bool:
        return self.argument is not None


@dataclass(frozen=True)
class Certificate:
    """Exact witness of a violated concavity comparison.

    ``support`` lists (J, w_J) with w_J > 0, Σ w_J = 1 and Σ w_J · J = center.
    ``lhs`` and ``rhs`` are the two sides after clearing roots: with common
    weight denominator q, lhs = V_center^q and rhs = Π V_J^{p_J}, p_J = w_J·q.
    A violation means lhs < rhs.
    """

    center: MultiIndex
    support: tuple[tuple[MultiIndex, Fraction], ...]
    lhs: Fraction
    rhs: Fraction
    comparison: str

    def __post_init__(self):
        total = sum((w for _, w in self.support), Fraction(0))
        if total != 1:
            raise ValueError(f"support weights sum to {total}, expected 1")
        k = len(self.center)
        for j in range(k):
            coord = sum((w * idx[j] for idx, w in self.support), Fraction(0))
            if coord != self.center[j]:
                raise ValueError(
                    f"support combination misses the center in coordinate {j}: {coord} != {self.center[j]}"
                )

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "support": [
                {"index": list(idx), "weight": format_rational(w)} for idx, w in self.support
            ],
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "comparison": self.comparison,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        try:
            return cls(
                center=tuple(int(x) for x in doc["center"]),
                support=tuple(
                    (tuple(int(x) for x in item["index"]), Fraction(item["weight"]))
                    for item in doc["support"]
                ),
                lhs=Fraction(doc["lhs"]),
                rhs=Fraction(doc["rhs"]),
                comparison=str(doc["comparison"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate document: {exc}") from exc


@dataclass(frozen=True)
class Report:
    """Outcome of one inequality check.

    ``certificates`` is nonempty exactly when the verdict is "fails";
    ``checked_count`` is the number of comparisons (or centers) examined.
    ``diagnostic`` carries optional non-authoritative floating-point context.
    """

    verdict: str
    certificates: tuple[Certificate, ...]
    checked_count: int
    diagnostic: str | None = None

    def __post_init__(self):
        if (self.verdict == FAILS) != bool(self.certificates):
            raise ValueError("certificates must be present exactly for a failing verdict")

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        doc = {
            "verdict": self.verdict,
            "checked": self.checked_count,
            "certificates": [c.to_json() for c in self.certificates],
        }
        if self.diagnostic is not None:
            doc["diagnostic"] = self.diagnostic
        return doc


def _power_certificate(
    center: MultiIndex,
    support: Sequence[tuple[MultiIndex, Fraction]],
    values: dict[MultiIndex, Fraction],
) -> Certificate:
    q = lcm(*(w.denominator for _, w in support))
    lhs = values[center] ** q
    rhs = Fraction(1)
    pieces = []
    for idx, w in support:
        p = w.numerator * (q // w.denominator)
        rhs *= values[idx] ** p
        pieces.append(f"V{tuple(idx)}^{p}")
    comparison = f"V{tuple(center)}^{q} vs " + " * ".join(pieces)
    return Certificate(center=center, support=tuple(support), lhs=lhs, rhs=rhs, comparison=comparison)


def recheck_certificate(vp: VolumePolynomial, cert: Certificate) -> bool:
    """Recompute both sides of a certificate from the polynomial; exact match."""
    try:
        fresh = _power_certificate(cert.center, cert.support, dict(vp.coefficients))
    except (KeyError, ValueError):
        return False
    return fresh.lhs == cert.lhs and fresh.rhs == cert.rhs and cert.lhs < cert.rhs


# ---------------------------------------------------------------------------
# Alexandrov-Fenchel


def _af_report(v12: Fraction, v11: Fraction, v22: Fraction, what: str, n: int) -> Report:
    lhs = v12 * v12
    rhs = v11 * v22
    values = (
        f"{what}(1,2,rest) = {v12}, {what}(1,1,rest) = {v11}, {what}(2,2,rest) = {v22}; "
        f"squared comparison {lhs} vs {rhs}"
    )
    if lhs >= rhs:
        return Report(verdict=HOLDS, certificates=(), checked_count=1, diagnostic=values)
    # I = e1 + e2 + (1,...,1) on the remaining slots, halfway between the
    # doubled indices.
    center = tuple([1, 1] + [1] * (n - 2))
    a = tuple([2, 0] + [1] * (n - 2))
    b = tuple([0, 2] + [1] * (n - 2))
    half = Fraction(1, 2)
    cert = Certificate(
        center=center,
        support=((a, half), (b, half)),
        lhs=lhs,
        rhs=rhs,
        comparison=f"{what}(1,2,rest)^2 vs {what}(1,1,rest)*{what}(2,2,rest)",
    )
    return Report(verdict=FAILS, certificates=(cert,), checked_count=1, diagnostic=values)


def af_check_volumes(bodies: Sequence[Body]) -> Report:
    """V(A_1,A_2,rest)^2 >= V(A_1,A_1,rest) * V(A_2,A_2,rest), exactly.

    The first two bodies are the varying pair; the rest stay fixed.
    """
    n = len(bodies)
    if n < 2:
        raise ValueError("the comparison needs at least two bodies")
    rest = list(bodies[2:])
    v12 = mixed_volume([bodies[0], bodies[1], *rest])
    v11 = mixed_volume([bodies[0], bodies[0], *rest])
    v22 = mixed_volume([bodies[1], bodies[1], *rest])
    return _af_report(v12, v11, v22, "V", n)


def af_check_discriminants(matrices: Sequence[SymMatrix]) -> Report:
    """The matrix analogue of the squared-mixed-volume inequality, for
    positive-definite symmetric matrices."""
    n = len(matrices)
    if n < 2:
        raise ValueError("the comparison needs at least two matrices")
    for pos, m in enumerate(matrices):
        if not is_positive_definite(m):
            raise PreconditionError(f"matrix {pos} is not positive definite")
    rest = list(matrices[2:])
    d12 = mixed_discriminant([matrices[0], matrices[1], *rest])
    d11 = mixed_discriminant([matrices[0], matrices[0], *rest])
    d22 = mixed_discriminant([matrices[1], matrices[1], *rest])
    return _af_report(d12, d11, d22, "D", n)


# ---------------------------------------------------------------------------
# Concavity on the discrete simplex


def segment_concavity(vp: VolumePolynomial) -> Report:
    """Concavity of log V_I along simplex segments parallel to an edge:
    V_I^2 >= V_{I+e_a-e_b} * V_{I-e_a+e_b} for every valid step.

    Zero coefficients only ever help (the right side vanishes).  With no
    checkable segment at all (k = 1) the verdict is vacuous.
    """
    coeffs = vp.coefficients
    checked = 0
    certs: list[Certificate] = []
    for index in discrete_simplex(vp.k, vp.n):
        for a, b in combinations(range(vp.k), 2):
            if index[a] < 1 or index[b] < 1:
                continue
            up = list(index)
            up[a] += 1
            up[b] -= 1
            down = list(index)
            down[a] -= 1
            down[b] += 1
            plus, minus = tuple(up), tuple(down)
            checked += 1
            lhs = coeffs[index] ** 2
            rhs = coeffs[plus] * coeffs[minus]
            if lhs < rhs:
                half = Fraction(1, 2)
                certs.append(
                    _power_certificate(index, ((plus, half), (minus, half)), dict(coeffs))
                )
    if checked == 0:
        return Report(verdict=VACUOUS, certificates=(), checked_count=0)
    if certs:
        return Report(verdict=FAILS, certificates=tuple(certs), checked_count=checked)
    return Report(verdict=HOLDS, certificates=(), checked_count=checked)


def _solve_unique(
    cols: list[tuple[int, ...]], rhs: Sequence[int]
) -> tuple[Fraction, ...] | None:
    # Solve the overdetermined system (columns as unknown coefficients)
    # exactly; None unless a unique solution exists.
    k = len(rhs)
    s = len(cols)
    aug = [[Fraction(cols[j][i]) for j in range(s)] + [Fraction(rhs[i])] for i in range(k)]
    pivots = []
    r = 0
    for c in range(s):
        pivot = next((i for i in range(r, k) if aug[i][c] != 0), None)
        if pivot is None:
            return None  # dependent columns: covered by a smaller support
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, k):
        if aug[i][s] != 0:
            return None  # inconsistent
    return tuple(aug[i][s] for i in range(s))


def _envelope_scan(vp: VolumePolynomial) -> tuple[list[Certificate], int]:
    # Enumerate, for every center I with V_I > 0, the vertices of the weight
    # polytope {w >= 0 : Σ w_J J = I, support on J != I with V_J > 0} and
    # build the exact power comparison at each. Returns all comparisons
    # (violated or not) plus the number of centers examined.
    coeffs = dict(vp.coefficients)
    log_values = {idx: LogValue.of(v) for idx, v in coeffs.items()}
    positive = [idx for idx in discrete_simplex(vp.k, vp.n) if log_values[idx].is_finite]
    k = vp.k
    comparisons: list[Certificate] = []
    checked = 0
    for center in positive:
        cands = [idx for idx in positive if idx != center]
        if not cands:
            continue
        checked += 1
        eq_lhs = Matrix([[cands[j][i] for j in range(len(cands))] for i in range(k)])
        lp = simplex_max([Fraction(0)] * len(cands), eq_lhs, [Fraction(x) for x in center])
        if lp.status == INFEASIBLE:
            continue
        seen: set[tuple] = set()
        for size in range(1, min(k, len(cands)) + 1):
            for subset in combinations(range(len(cands)), size):
                cols = [cands[j] for j in subset]
                w = _solve_unique(cols, center)
                if w is None or any(x <= 0 for x in w):
                    continue
                support = tuple(sorted(zip(cols, w)))
                if support in seen:
                    continue
                seen.add(support)
                comparisons.append(_power_certificate(center, support, coeffs))
    return comparisons, checked


def envelope_vertex_comparisons(vp: VolumePolynomial) -> tuple[Certificate, ...]:
    """Every vertex comparison of the concave-envelope test, violated or not.

    The weighted geometric mean over a polytope of weights is maximized at a
    vertex (the objective Σ w_J log V_J is linear in w), so these comparisons
    are exhaustive evidence for or against envelope concavity.
    """
    comparisons, _ = _envelope_scan(vp)
    return tuple(comparisons)


def gromov_concavity(vp: VolumePolynomial) -> Report:
    """Concavity of log V_I against arbitrary convex combinations of other
    simplex points (the concave-envelope reading).

    For each center I with V_I > 0 the feasible weight polytope is screened
    with an exact LP and then searched at its vertices, where weights are
    rational and the comparison V_I^q vs Π V_J^{p_J} is exact.  Points with
    V_J = 0 can never contribute (log 0 = -infinity).
    """
    comparisons, checked = _envelope_scan(vp)
    certs = [c for c in comparisons if c.lhs < c.rhs]
    if certs:
        return Report(verdict=FAILS, certificates=tuple(certs), checked_count=checked)
    return Report(verdict=HOLDS, certificates=(), checked_count=checked)


def gromov_triple_check(bodies: Sequence[Body]) -> Report:
    """The three-body cyclic comparison in R^3:
    V(A_1,A_2,A_3)^3 vs V(A_1,A_1,A_2) * V(A_2,A_2,A_3) * V(A_3,A_3,A_1)."""
    if len(bodies) != 3:
        raise ValueError(f"the triple comparison needs exactly 3 bodies, got {len(bodies)}")
    for b in bodies:
        if body_dim(b) != 3:
            raise ValueError("the triple comparison lives in dimension 3")
    a1, a2, a3 = bodies
    v123 = mixed_volume([a1, a2, a3])
    v112 = mixed_volume([a1, a1, a2])
    v223 = mixed_volume([a2, a2, a3])
    v331 = mixed_volume([a3, a3, a1])
    lhs = v123**3
    rhs = v112 * v223 * v331
    values = (
        f"V(A1,A2,A3) = {v123}, V(A1,A1,A2) = {v112}, "
        f"V(A2,A2,A3) = {v223}, V(A3,A3,A1) = {v331}; cubed comparison {lhs} vs {rhs}"
    )
    if lhs >= rhs:
        return Report(verdict=HOLDS, certificates=(), checked_count=1, diagnostic=values)
    third = Fraction(1, 3)
    cert = Certificate(
        center=(1, 1, 1),
        support=(((2, 1, 0), third), ((0, 2, 1), third), ((1, 0, 2), third)),
        lhs=lhs,
        rhs=rhs,
        comparison="V(1,1,1)^3 vs V(2,1,0)^1 * V(0,2,1)^1 * V(1,0,2)^1",
    )
    return Report(verdict=FAILS, certificates=(cert,), checked_count=1, diagnostic=values)


# ---------------------------------------------------------------------------
# Brunn-Minkowski surrogate and the permanent bound


def minkowski_sequence_check(a: Body, b: Body, n: int, *, digits: int = 64) -> Report:
    """Log-concavity of V_j = V(A,...,A,B,...,B) (j copies of A), the exact
    surrogate that implies the root-form volume inequality for A + B.

    The root form itself is also evaluated in ``digits``-digit floating point
    and reported as a non-authoritative diagnostic.
    """
    if body_dim(a) != n or body_dim(b) != n:
        raise ValueError("both bodies must live in the stated dimension")
    seq = [mixed_volume([a] * j + [b] * (n - j)) for j in range(n + 1)]
    checked = 0
    certs: list[Certificate] = []
    for j in range(1, n):
        checked += 1
        lhs = seq[j] ** 2
        rhs = seq[j - 1] * seq[j + 1]
        if lhs < rhs:
            half = Fraction(1, 2)
            values = {
                (j, n - j): seq[j],
                (j - 1, n - j + 1): seq[j - 1],
                (j + 1, n - j - 1): seq[j + 1],
            }
            certs.append(
                _power_certificate(
                    (j, n - j),
                    (((j + 1, n - j - 1), half), ((j - 1, n - j + 1), half)),
                    values,
                )
            )
    with mpmath.workdps(digits):
        va = mpmath.mpf(seq[n].numerator) / seq[n].denominator
        vb = mpmath.mpf(seq[0].numerator) / seq[0].denominator
        vsum = volume(minkowski_sum([(Fraction(1), a), (Fraction(1), b)]))
        vs = mpmath.mpf(vsum.numerator) / vsum.denominator
        gap = mpmath.root(vs, n) - mpmath.root(va, n) - mpmath.root(vb, n)
        diagnostic = (
            f"root form V(A+B)^(1/{n}) - V(A)^(1/{n}) - V(B)^(1/{n}) "
            f"= {mpmath.nstr(gap, 12)} ({digits}-digit float, non-authoritative)"
        )
    if checked == 0:
        return Report(verdict=VACUOUS, certificates=(), checked_count=0, diagnostic=diagnostic)
    if certs:
        return Report(verdict=FAILS, certificates=tuple(certs), checked_count=checked, diagnostic=diagnostic)
    return Report(verdict=HOLDS, certificates=(), checked_count=checked, diagnostic=diagnostic)


@dataclass(frozen=True)
class VdwResult:
    """Margin of the permanent over its doubly stochastic minimum n!/n^n."""

    margin: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"margin": format_rational(self.margin), "holds": self.holds}


def vdw_check(m: Matrix) -> VdwResult:
    """permanent(m) - n!/n^n for a doubly stochastic matrix, with the
    nonnegativity verdict; the minimum is attained at the all-1/n matrix."""
    if not m.is_square():
        raise PreconditionError(f"matrix must be square, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        raise PreconditionError("matrix must be nonempty")
    for i in range(n):
        for j in range(n):
            if m[i][j] < 0:
                raise PreconditionError(f"entry ({i},{j}) is negative: {m[i][j]}")
    for i in range(n):
        s = sum(m.row(i), Fraction(0))
        if s != 1:
            raise PreconditionError(f"row {i} sums to {s}, expected 1")
    for j in range(n):
        s = sum((m[i][j] for i in range(n)), Fraction(0))
        if s != 1:
            raise PreconditionError(f"column {j} sums to {s}, expected 1")
    margin = permanent(m) - Fraction(factorial(n), n**n)
    return VdwResult(margin=margin, holds=margin >= 0)
