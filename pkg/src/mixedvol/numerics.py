"""Exact rational linear algebra: matrices, permanents, determinants, solving,
positive-definiteness, and an exact equality-form LP solver.

Every correctness-bearing value in this package is a ``fractions.Fraction``;
nothing in this module touches floating point except the explicitly opt-in
fast path of :func:`permanent`.  All functions are pure and operate on
immutable inputs, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class DimensionError(ValueError):
    """Shapes of the operands do not fit the requested operation."""


class SingularSystemError(ValueError):
    """A linear solve was attempted on a singular system."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts Fraction, int, and strings like ``"5"``, ``"-8/3"`` or ``"1.25"``.
    Floats are rejected: a binary float silently misrepresents values such as
    1/3, and exactness is the whole point of this package.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational (Fraction, int, or string), got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Canonical wire form: ``"p/q"`` with q > 1, else just ``"p"``."""
    return str(value)


class Matrix:
    """Immutable dense matrix of exact rationals, stored row-major."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        converted = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if converted:
            width = len(converted[0])
            for row in converted:
                if len(row) != width:
                    raise DimensionError("matrix rows must all have the same length")
        self._rows = converted

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self._rows for x in row)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def row_list(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def __iter__(self):
        return iter(self._rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self._rows)) if self._rows else Matrix([])

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("matrix addition requires equal shapes")
        return type(self)(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def scaled(self, factor: RationalLike) -> "Matrix":
        lam = as_rational(factor)
        return type(self)([[lam * x for x in row] for row in self._rows])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"Matrix[{body}]"

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]


class SymMatrix(Matrix):
    """Square symmetric matrix; symmetry is validated on construction."""

    __slots__ = ()

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        super().__init__(rows)
        if not self.is_square():
            raise DimensionError("symmetric matrix must be square")
        for i in range(self.rows):
            for j in range(i + 1, self.cols):
                if self._rows[i][j] != self._rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i},{j})")

    @property
    def dim(self) -> int:
        return self.rows

    @classmethod
    def diagonal(cls, values: Iterable[RationalLike]) -> "SymMatrix":
        vals = [as_rational(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])


def permanent(m: Matrix, *, use_float: bool = False) -> Fraction | float:
    """Permanent of a square matrix by Ryser's inclusion-exclusion.

    Column subsets are walked in Gray-code order so each step updates the
    per-row sums by a single column.  The empty matrix has permanent 1.

    ``use_float=True`` runs the same loop in double precision and returns a
    float.  That path exists for benchmarks only; nothing that decides an
    inequality verdict may use it.
    """
    if not m.is_square():
        raise DimensionError(f"permanent requires a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return 1.0 if use_float else Fraction(1)

    if use_float:
        cols = [[float(m[i][j]) for i in range(n)] for j in range(n)]
        sums = [0.0] * n
        zero = 0.0
    else:
        cols = [[m[i][j] for i in range(n)] for j in range(n)]
        sums = [Fraction(0)] * n
        zero = Fraction(0)

    total = zero
    gray = 0
    for t in range(1, 1 << n):
        j = (t & -t).bit_length() - 1
        gray ^= 1 << j
        col = cols[j]
        if gray >> j & 1:
            for i in range(n):
                sums[i] += col[i]
        else:
            for i in range(n):
                sums[i] -= col[i]
        prod = sums[0]
        for i in range(1, n):
            prod *= sums[i]
        if (n - gray.bit_count()) & 1:
            total -= prod
        else:
            total += prod
    return total


def determinant(m: Matrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    The empty matrix has determinant 1.
    """
    if not m.is_square():
        raise DimensionError(f"determinant requires a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.row_list()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def solve_linear(a: Matrix, b: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Exact solution of ``a @ x = b`` for square nonsingular ``a``.

    Raises :class:`SingularSystemError` when ``a`` is singular; the caller
    decides the fallback.
    """
    if not a.is_square():
        raise DimensionError(f"solve_linear requires a square matrix, got {a.rows}x{a.cols}")
    n = a.rows
    rhs = [as_rational(x) for x in b]
    if len(rhs) != n:
        raise DimensionError(f"right-hand side length {len(rhs)} != matrix dimension {n}")
    aug = [list(a.row(i)) + [rhs[i]] for i in range(n)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if pivot is None:
            raise SingularSystemError("matrix is singular")
        aug[k], aug[pivot] = aug[pivot], aug[k]
        pk = aug[k][k]
        for i in range(k + 1, n):
            f = aug[i][k] / pk
            if f:
                for j in range(k, n + 1):
                    aug[i][j] -= f * aug[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = aug[k][n]
        for j in range(k + 1, n):
            s -= aug[k][j] * x[j]
        x[k] = s / aug[k][k]
    return tuple(x)


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a sequence of rational row vectors."""
    work = [list(r) for r in rows if any(x != 0 for x in r)]
    rank = 0
    ncols = len(work[0]) if work else 0
    col = 0
    while work and col < ncols:
        pivot = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][col]
        for i in range(rank + 1, len(work)):
            f = work[i][col] / pv
            if f:
                for j in range(col, ncols):
                    work[i][j] -= f * work[rank][j]
        rank += 1
        col += 1
    return rank


def is_positive_definite(m: SymMatrix) -> bool:
    """True iff every leading principal minor is strictly positive (exact)."""
    if not isinstance(m, SymMatrix):
        m = SymMatrix(m)
    n = m.dim
    for k in range(1, n + 1):
        minor = Matrix([m.row(i)[:k] for i in range(k)])
        if determinant(minor) <= 0:
            return False
    return True


OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`simplex_max`.

    ``status`` is one of ``"optimal"``, ``"infeasible"``, ``"unbounded"``;
    ``optimum`` and ``solution`` are set only for the optimal case.
    """

    status: str
    optimum: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None


def simplex_max(
    objective: Sequence[RationalLike],
    eq_lhs: Matrix,
    eq_rhs: Sequence[RationalLike],
) -> LPResult:
    """Maximize ``objective . x`` over ``{x >= 0 : eq_lhs @ x = eq_rhs}``, exactly.

    Two-phase dense simplex with Bland's lowest-index pivot rule, which
    guarantees termination without any degeneracy perturbation.  Infeasibility
    and unboundedness are reported as distinct statuses.
    """
    c = [as_rational(v) for v in objective]
    b = [as_rational(v) for v in eq_rhs]
    m, n = eq_lhs.rows, eq_lhs.cols
    if len(c) != n:
        raise DimensionError(f"objective length {len(c)} != variable count {n}")
    if len(b) != m:
        raise DimensionError(f"rhs length {len(b)} != constraint count {m}")

    # Tableau rows: [original vars | artificial vars | rhs], one artificial per row.
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = list(eq_lhs.row(i))
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        row.extend(Fraction(int(j == i)) for j in range(m))
        row.append(rhs)
        tab.append(row)
    basis = [n + i for i in range(m)]

    def pivot(r: int, col: int, obj: list[Fraction]) -> None:
        pv = tab[r][col]
        tab[r] = [x / pv for x in tab[r]]
        for i in range(len(tab)):
            if i != r and tab[i][col]:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        if obj[col]:
            f = obj[col]
            for j in range(len(obj)):
                obj[j] -= f * tab[r][j]
        basis[r] = col

    def run_phase(obj: list[Fraction], active: int) -> str:
        # Bland's rule: entering = lowest index with positive reduced cost,
        # leaving = lowest basis index among minimal ratios.
        while True:
            enter = next((j for j in range(active) if obj[j] > 0), None)
            if enter is None:
                return OPTIMAL
            best: Fraction | None = None
            leave = -1
            for i in range(len(tab)):
                coeff = tab[i][enter]
                if coeff > 0:
                    ratio = tab[i][-1] / coeff
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if best is None:
                return UNBOUNDED
            pivot(leave, enter, obj)

    width = n + m + 1
    # Phase 1: maximize -(sum of artificials); start objective row reduced
    # against the artificial basis.
    obj1 = [Fraction(0)] * width
    for j in range(n):
        obj1[j] = sum(tab[i][j] for i in range(m))
    obj1[-1] = sum(tab[i][-1] for i in range(m))
    run_phase(obj1, n + m)
    if obj1[-1] != 0:
        return LPResult(status=INFEASIBLE)

    # Drive remaining artificials out of the basis; a row with no original
    # coefficient left is a redundant constraint and is dropped.
    for r in range(len(tab) - 1, -1, -1):
        if basis[r] >= n:
            col = next((j for j in range(n) if tab[r][j] != 0), None)
            if col is None:
                del tab[r]
                del basis[r]
            else:
                pivot(r, col, obj1)

    # Phase 2 on original columns only.
    for i in range(len(tab)):
        tab[i] = tab[i][:n] + [tab[i][-1]]
    obj2 = [*c, Fraction(0)]
    for r, bv in enumerate(basis):
        if obj2[bv]:
            f = obj2[bv]
            for j in range(n + 1):
                obj2[j] -= f * tab[r][j]
    status = run_phase(obj2, n)
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED)
    x = [Fraction(0)] * n
    for r, bv in enumerate(basis):
        x[bv] = tab[r][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(status=OPTIMAL, optimum=value, solution=tuple(x))
