"""Mixed volumes V_I and mixed discriminants D_I.

Vol(λ_1 A_1 + ... + λ_k A_k) is a homogeneous degree-n polynomial in λ; its
coefficients, indexed by the discrete simplex {I in Z_+^k : |I| = n}, are the
mixed volumes after the multinomial factor is split off:

    Vol(Σ λ_i A_i) = Σ_I multinomial(n; I) · V_I · λ^I

Coefficients are stored normalized (multinomial factor outside).  The same
expansion of det(Σ λ_i A_i) defines the mixed discriminants D_I.

Three independent routes are implemented: polarization (inclusion-exclusion
over body subsets), closed forms via permanents/determinants for boxes and
segments, and interpolation of the volume polynomial on an integer grid.
Route agreement is a standing cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .bodies import Body, body_dim, minkowski_sum, volume
from .numerics import (
    Matrix,
    SymMatrix,
    as_rational,
    determinant,
    format_rational,
    permanent,
    solve_linear,
)

MultiIndex = tuple[int, ...]


def discrete_simplex(k: int, n: int) -> list[MultiIndex]:
    """All I in Z_+^k with |I| = n, in lexicographic order."""
    if k < 1:
        raise ValueError("need at least one body")
    if n < 0:
        raise ValueError("dimension must be nonnegative")

    def rec(slots: int, total: int) -> Iterable[tuple[int, ...]]:
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(slots - 1, total - first):
                yield (first,) + rest

    return list(rec(k, n))


def multinomial(n: int, index: MultiIndex) -> int:
    """n! / (i_1! ... i_k!) for |index| = n."""
    if sum(index) != n:
        raise ValueError(f"index {index} does not sum to {n}")
    value = factorial(n)
    for i in index:
        value //= factorial(i)
    return value


@dataclass(frozen=True)
class VolumePolynomial:
    """The full coefficient map I -> V_I (or D_I) over the discrete simplex."""

    k: int
    n: int
    coefficients: Mapping[MultiIndex, Fraction]

    def __post_init__(self):
        expected = set(discrete_simplex(self.k, self.n))
        got = set(self.coefficients)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(
                f"coefficient keys must be the full discrete simplex; missing {missing}, extra {extra}"
            )
        object.__setattr__(self, "coefficients", dict(self.coefficients))

    def __getitem__(self, index: MultiIndex) -> Fraction:
        return self.coefficients[tuple(index)]

    def to_json(self) -> list[dict]:
        return [
            {"index": list(i), "value": format_rational(self.coefficients[i])}
            for i in sorted(self.coefficients)
        ]

    @classmethod
    def from_json(cls, doc: object) -> "VolumePolynomial":
        if not isinstance(doc, list) or not doc:
            raise ValueError("polynomial document must be a nonempty JSON array")
        coeffs: dict[MultiIndex, Fraction] = {}
        for item in doc:
            try:
                index = tuple(int(x) for x in item["index"])
                coeffs[index] = as_rational(item["value"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed polynomial entry {item!r}: {exc}") from exc
        k = len(next(iter(coeffs)))
        n = sum(next(iter(coeffs)))
        return cls(k=k, n=n, coefficients=coeffs)


@dataclass(frozen=True)
class BodyTuple:
    bodies: tuple[Body, ...]

    def __post_init__(self):
        if not self.bodies:
            raise ValueError("body tuple must be nonempty")
        dims = {body_dim(b) for b in self.bodies}
        if len(dims) != 1:
            raise ValueError(f"bodies live in different ambient dimensions: {sorted(dims)}")

    @property
    def k(self) -> int:
        return len(self.bodies)

    @property
    def n(self) -> int:
        return body_dim(self.bodies[0])


@dataclass(frozen=True)
class MatrixTuple:
    matrices: tuple[SymMatrix, ...]

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("matrix tuple must be nonempty")
        dims = {m.dim for m in self.matrices}
        if len(dims) != 1:
            raise ValueError(f"matrices have different dimensions: {sorted(dims)}")

    @property
    def k(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].dim


def mixed_volume(bodies: Sequence[Body]) -> Fraction:
    """V(A_1, ..., A_n) by polarization:

        V = (1/n!) Σ_{∅ ≠ S ⊆ [n]} (−1)^{n−|S|} Vol(Σ_{i∈S} A_i)

    (the empty set contributes Vol(∅) = 0). Symmetric in its arguments and
    equal to Vol(A) when all arguments are the same body A.
    """
    n = len(bodies)
    if n == 0:
        raise ValueError("mixed volume needs at least one body")
    for b in bodies:
        if body_dim(b) != n:
            raise ValueError(
                f"mixed volume needs exactly n bodies in dimension n; got {n} bodies, one of dimension {body_dim(b)}"
            )
    total = Fraction(0)
    one = Fraction(1)
    for mask in range(1, 1 << n):
        parts = [(one, bodies[i]) for i in range(n) if mask >> i & 1]
        v = volume(minkowski_sum(parts))
        if (n - mask.bit_count()) & 1:
            total -= v
        else:
            total += v
    return total / factorial(n)


def mixed_volume_boxes(sides: Matrix) -> Fraction:
    """Mixed volume of boxes A_i = [0, a_i1] x ... x [0, a_in] from the side
    matrix (a_ij): the permanent divided by n!."""
    if not sides.is_square():
        raise ValueError(f"side matrix must be square, got {sides.rows}x{sides.cols}")
    for row in sides:
        for x in row:
            if x < 0:
                raise ValueError(f"box side length must be nonnegative, got {x}")
    return permanent(sides) / factorial(sides.rows)


def mixed_volume_segments(generators: Sequence[Sequence[object]]) -> Fraction:
    """Mixed volume of the segments [0, v_i]: |det(v_1, ..., v_n)| / n!."""
    m = Matrix(generators)
    if not m.is_square():
        raise ValueError(f"need n generators of length n, got {m.rows} of length {m.cols}")
    d = determinant(m)
    return (d if d >= 0 else -d) / factorial(m.rows)


def _weighted_volume(bodies: Sequence[Body], weights: Sequence[int]) -> Fraction:
    parts = [(Fraction(c), b) for c, b in zip(weights, bodies) if c > 0]
    if not parts:
        return Fraction(0)
    return volume(minkowski_sum(parts))


def _polarize_index(
    bodies: Sequence[Body],
    index: MultiIndex,
    n: int,
    cache: dict[tuple[int, ...], Fraction] | None,
) -> Fraction:
    # Group the 2^n polarization subsets of the multiset expansion by how many
    # copies of each distinct body they pick: subsets with count vector c
    # contribute with multiplicity Π_j C(i_j, c_j).
    total = Fraction(0)
    ranges = [range(i + 1) for i in index]
    for c in product(*ranges):
        size = sum(c)
        if size == 0:
            continue
        if cache is None:
            v = _weighted_volume(bodies, c)
        else:
            v = cache.get(c)
            if v is None:
                v = _weighted_volume(bodies, c)
                cache[c] = v
        mult = 1
        for i_j, c_j in zip(index, c):
            mult *= comb(i_j, c_j)
        term = mult * v
        if (n - size) & 1:
            total -= term
        else:
            total += term
    return total / factorial(n)


def volume_polynomial(t: BodyTuple, *, memoize: bool = False) -> VolumePolynomial:
    """All mixed volumes V_I of the tuple, one polarization per coefficient.

    With ``memoize=True`` the volumes of weighted Minkowski sums are shared
    across coefficients; results are identical either way.
    """
    n = t.n
    cache: dict[tuple[int, ...], Fraction] | None = {} if memoize else None
    coeffs = {
        index: _polarize_index(t.bodies, index, n, cache)
        for index in discrete_simplex(t.k, n)
    }
    return VolumePolynomial(k=t.k, n=n, coefficients=coeffs)


def volume_polynomial_interpolated(t: BodyTuple) -> VolumePolynomial:
    """Recover the coefficients by evaluating Vol(Σ λ_i A_i) on a
    deterministic positive-integer grid and solving the exact linear system.

    Grid points are taken in shells of increasing maximum entry; rows are kept
    only while they raise the rank of the fit system, so the final square
    system is nonsingular by construction.
    """
    k, n = t.k, t.n
    indices = discrete_simplex(k, n)
    m = len(indices)
    mults = [multinomial(n, i) for i in indices]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    # Row echelon copy used only for rank tracking.
    echelon: list[list[Fraction]] = []

    def try_add(lam: tuple[int, ...]) -> None:
        row = [
            Fraction(mult) * Fraction(
                # λ^I as an exact integer
                _int_power_product(lam, idx)
            )
            for mult, idx in zip(mults, indices)
        ]
        cand = list(row)
        for piv in echelon:
            lead = next(j for j in range(m) if piv[j] != 0)
            if cand[lead] != 0:
                f = cand[lead] / piv[lead]
                for j in range(lead, m):
                    cand[j] -= f * piv[j]
        if any(x != 0 for x in cand):
            echelon.append(cand)
            rows.append(row)
            rhs.append(_weighted_volume(t.bodies, lam))

    for shell in count(1):
        for lam in product(range(1, shell + 1), repeat=k):
            if max(lam) != shell:
                continue  # already visited in an earlier shell
            try_add(lam)
            if len(rows) == m:
                break
        if len(rows) == m:
            break

    solution = solve_linear(Matrix(rows), rhs)
    return VolumePolynomial(k=k, n=n, coefficients=dict(zip(indices, solution)))


def _int_power_product(lam: tuple[int, ...], index: MultiIndex) -> int:
    p = 1
    for base, exp in zip(lam, index):
        p *= base**exp
    return p


def mixed_discriminant(matrices: Sequence[SymMatrix]) -> Fraction:
    """D(A_1, ..., A_n) by polarization with determinants in place of volumes."""
    n = len(matrices)
    if n == 0:
        raise ValueError("mixed discriminant needs at least one matrix")
    mats = [m if isinstance(m, SymMatrix) else SymMatrix(m) for m in matrices]
    for m in mats:
        if m.dim != n:
            raise ValueError(
                f"mixed discriminant needs exactly n matrices of dimension n; got {n} matrices, one of dimension {m.dim}"
            )
    total = Fraction(0)
    for mask in range(1, 1 << n):
        chosen = [mats[i] for i in range(n) if mask >> i & 1]
        acc = chosen[0]
        for m in chosen[1:]:
            acc = acc + m
        d = determinant(acc)
        if (n - mask.bit_count()) & 1:
            total -= d
        else:
            total += d
    return total / factorial(n)


def _weighted_det(matrices: Sequence[SymMatrix], weights: Sequence[int]) -> Fraction:
    n = matrices[0].dim
    acc = [[Fraction(0)] * n for _ in range(n)]
    for c, m in zip(weights, matrices):
        if c:
            for i in range(n):
                row = m.row(i)
                for j in range(n):
                    acc[i][j] += c * row[j]
    return determinant(Matrix(acc))


def discriminant_polynomial(t: MatrixTuple) -> VolumePolynomial:
    """All mixed discriminants D_I of the tuple; coefficients may be negative
    for indefinite matrices."""
    n = t.n
    coeffs: dict[MultiIndex, Fraction] = {}
    for index in discrete_simplex(t.k, n):
        total = Fraction(0)
        ranges = [range(i + 1) for i in index]
        for c in product(*ranges):
            size = sum(c)
            if size == 0:
                continue
            mult = 1
            for i_j, c_j in zip(index, c):
                mult *= comb(i_j, c_j)
            term = mult * _weighted_det(t.matrices, c)
            if (n - size) & 1:
                total -= term
            else:
                total += term
        coeffs[index] = total / factorial(n)
    return VolumePolynomial(k=t.k, n=n, coefficients=coeffs)
