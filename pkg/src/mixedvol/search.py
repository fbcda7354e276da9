"""Deterministic search over box families for violations of concavity of
log V_I, reproducing known counterexamples and hunting for new ones.

Candidates are k boxes in R^n with side lengths drawn from a finite grid, so a
candidate is a k x n side matrix.  The hot path evaluates the target
inequality through integer-scaled permanents; every emitted Finding is
re-derivable through the completely independent polarization route
(:func:`verify_finding`), which guards the fast path against itself.

Everything is a pure function of (space, config): the random stream is a
counter-based generator keyed by (seed, candidate index, cell), so results
are identical across runs and across worker counts.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Iterator, Sequence

from .bodies import AxisBox
from .inequalities import (
    Certificate,
    envelope_vertex_comparisons,
    recheck_certificate,
)
from .mixed import BodyTuple, VolumePolynomial, discrete_simplex, volume_polynomial
from .numerics import Matrix, as_rational, format_rational, permanent

EXHAUSTIVE = "exhaustive-grid"
RANDOM = "random"
HILL_CLIMB = "hill-climb"
MODES = (EXHAUSTIVE, RANDOM, HILL_CLIMB)

TRIPLE = "triple-inequality"
ENVELOPE = "full-envelope"
TARGETS = (TRIPLE, ENVELOPE)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SearchSpace:
    """Box families: k bodies in R^n, each side from a fixed rational grid.

    The grid is canonicalized to sorted order, so candidate numbering does not
    depend on how the caller listed the values.  Zero side lengths are allowed
    on purpose: the known violations need flat boxes.
    """

    side_grid: tuple[Fraction, ...]
    n: int = 3
    k: int = 3

    def __post_init__(self):
        grid = sorted({as_rational(v) for v in self.side_grid})
        if not grid:
            raise ValueError("side grid must be nonempty")
        for v in grid:
            if v < 0:
                raise ValueError(f"side grid values must be nonnegative, got {v}")
        object.__setattr__(self, "side_grid", tuple(grid))
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be at least 1")


@dataclass(frozen=True)
class SearchConfig:
    mode: str = EXHAUSTIVE
    seed: int = 0
    max_evaluations: int = 1_000_000
    target: str = TRIPLE

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}, expected one of {TARGETS}")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be at least 1")
        object.__setattr__(self, "seed", self.seed & _MASK64)


@dataclass(frozen=True)
class Finding:
    """A violated candidate: the box side matrix (row i = sides of body i),
    the exact certificate, and rhs/lhs of the comparison (> 1 iff violated).
    ``index`` is the evaluation position, kept for deterministic ordering."""

    index: int
    side_matrix: Matrix
    certificate: Certificate
    violation_ratio: Fraction

    def to_json(self) -> dict:
        return {
            "candidate": self.index,
            "side_matrix": self.side_matrix.to_json(),
            "violation_ratio": format_rational(self.violation_ratio),
            "certificate": self.certificate.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Finding":
        try:
            return cls(
                index=int(doc["candidate"]),
                side_matrix=Matrix(doc["side_matrix"]),
                certificate=Certificate.from_json(doc["certificate"]),
                violation_ratio=Fraction(doc["violation_ratio"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed finding document: {exc}") from exc


@dataclass(frozen=True)
class SearchResult:
    """Findings sorted by descending violation ratio (ties by evaluation
    order), plus the number of candidates evaluated."""

    findings: tuple[Finding, ...]
    evaluations: int

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)

    def __len__(self) -> int:
        return len(self.findings)

    def __getitem__(self, i):
        return self.findings[i]

    @property
    def best_ratio(self) -> Fraction | None:
        return self.findings[0].violation_ratio if self.findings else None


# ---------------------------------------------------------------------------
# Counter-based randomness


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _cell_draw(seed: int, index: int, cell: int) -> int:
    key = (
        seed * 0x9E3779B97F4A7C15 + index * 0xD1B54A32D192ED03 + cell * 0x8CB92BA72F3D8DD7
    ) & _MASK64
    return _splitmix64(key)


# ---------------------------------------------------------------------------
# Candidate evaluation


def _perm3(r0: Sequence[int], r1: Sequence[int], r2: Sequence[int]) -> int:
    return (
        r0[0] * (r1[1] * r2[2] + r1[2] * r2[1])
        + r0[1] * (r1[0] * r2[2] + r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] + r1[1] * r2[0])
    )


def _int_permanent(rows: list[Sequence[int]]) -> int:
    n = len(rows)
    if n == 3:
        return _perm3(rows[0], rows[1], rows[2])
    if n == 0:
        return 1
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    sums = [0] * n
    total = 0
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
        prod = 1
        for s in sums:
            prod *= s
        if (n - gray.bit_count()) & 1:
            total -= prod
        else:
            total += prod
    return total


@dataclass(frozen=True)
class _Space:
    # Precomputed per-search constants shared by all candidates.
    grid: tuple[Fraction, ...]
    int_grid: tuple[int, ...]
    denom: int
    n: int
    k: int

    @classmethod
    def of(cls, space: SearchSpace) -> "_Space":
        denom = lcm(*(v.denominator for v in space.side_grid))
        return cls(
            grid=space.side_grid,
            int_grid=tuple(int(v * denom) for v in space.side_grid),
            denom=denom,
            n=space.n,
            k=space.k,
        )


def _digits_of(index: int, base: int, cells: int) -> tuple[int, ...]:
    out = [0] * cells
    for c in range(cells - 1, -1, -1):
        index, out[c] = divmod(index, base)
    return tuple(out)


def _triple_ratio(sp: _Space, digits: Sequence[int]) -> Fraction:
    # Integer-scaled comparison: each V scales by denom^n * n!, and both sides
    # of V(1,2,3)^3 vs the cyclic product carry the same total factor, so the
    # scaled permanents compare directly and their ratio is the true ratio.
    g = sp.int_grid
    r1 = (g[digits[0]], g[digits[1]], g[digits[2]])
    r2 = (g[digits[3]], g[digits[4]], g[digits[5]])
    r3 = (g[digits[6]], g[digits[7]], g[digits[8]])
    lhs = _perm3(r1, r2, r3) ** 3
    rhs = _perm3(r1, r1, r2) * _perm3(r2, r2, r3) * _perm3(r3, r3, r1)
    if rhs == 0:
        return Fraction(0)
    # A row-support argument rules out lhs = 0 with rhs > 0 for boxes, but the
    # guard keeps the invariant visible.
    if lhs == 0:
        raise ArithmeticError("cyclic product positive while the mixed volume vanishes")
    return Fraction(rhs, lhs)


def _box_polynomial(sp: _Space, digits: Sequence[int]) -> VolumePolynomial:
    # Permanent-route polynomial of the candidate boxes, exact Fractions.
    rows = [
        [sp.grid[digits[i * sp.n + j]] for j in range(sp.n)] for i in range(sp.k)
    ]
    nfact = factorial(sp.n)
    coeffs = {}
    for idx in discrete_simplex(sp.k, sp.n):
        stacked = []
        for i, mult in enumerate(idx):
            stacked.extend([rows[i]] * mult)
        coeffs[idx] = permanent(Matrix(stacked)) / nfact
    return VolumePolynomial(k=sp.k, n=sp.n, coefficients=coeffs)


def _candidate_matrix(sp: _Space, digits: Sequence[int]) -> Matrix:
    return Matrix(
        [[sp.grid[digits[i * sp.n + j]] for j in range(sp.n)] for i in range(sp.k)]
    )


def _triple_finding(sp: _Space, digits: Sequence[int], index: int) -> Finding:
    side = _candidate_matrix(sp, digits)
    scale = Fraction(1, sp.denom**sp.n * factorial(sp.n))
    g = sp.int_grid
    r1 = (g[digits[0]], g[digits[1]], g[digits[2]])
    r2 = (g[digits[3]], g[digits[4]], g[digits[5]])
    r3 = (g[digits[6]], g[digits[7]], g[digits[8]])
    v123 = _perm3(r1, r2, r3) * scale
    v112 = _perm3(r1, r1, r2) * scale
    v223 = _perm3(r2, r2, r3) * scale
    v331 = _perm3(r3, r3, r1) * scale
    third = Fraction(1, 3)
    cert = Certificate(
        center=(1, 1, 1),
        support=(((2, 1, 0), third), ((0, 2, 1), third), ((1, 0, 2), third)),
        lhs=v123**3,
        rhs=v112 * v223 * v331,
        comparison="V(1,1,1)^3 vs V(2,1,0)^1 * V(0,2,1)^1 * V(1,0,2)^1",
    )
    return Finding(
        index=index,
        side_matrix=side,
        certificate=cert,
        violation_ratio=cert.rhs / cert.lhs,
    )


def _evaluate(sp: _Space, target: str, digits: Sequence[int], index: int) -> tuple[Fraction, Finding | None]:
    """Ratio rhs/lhs of the strongest comparison, and a Finding when > 1."""
    if target == TRIPLE:
        ratio = _triple_ratio(sp, digits)
        if ratio > 1:
            return ratio, _triple_finding(sp, digits, index)
        return ratio, None
    vp = _box_polynomial(sp, digits)
    best = Fraction(0)
    best_cert: Certificate | None = None
    for cert in envelope_vertex_comparisons(vp):
        ratio = cert.rhs / cert.lhs
        if ratio > best:
            best = ratio
            best_cert = cert
    if best > 1 and best_cert is not None:
        side = _candidate_matrix(sp, digits)
        return best, Finding(
            index=index, side_matrix=side, certificate=best_cert, violation_ratio=best
        )
    return best, None


def _candidate_digits(sp: _Space, config: SearchConfig, index: int) -> tuple[int, ...]:
    cells = sp.k * sp.n
    g = len(sp.grid)
    if config.mode == RANDOM:
        return tuple(_cell_draw(config.seed, index, c) % g for c in range(cells))
    return _digits_of(index, g, cells)


def _scan_range(space: SearchSpace, config: SearchConfig, start: int, stop: int) -> list[Finding]:
    sp = _Space.of(space)
    out: list[Finding] = []
    for index in range(start, stop):
        digits = _candidate_digits(sp, config, index)
        _, finding = _evaluate(sp, config.target, digits, index)
        if finding is not None:
            out.append(finding)
    return out


def _check_target(space: SearchSpace, config: SearchConfig) -> None:
    if config.target == TRIPLE and (space.k != 3 or space.n != 3):
        raise ValueError("the triple-inequality target needs k = 3 bodies in dimension 3")


def _finish(found: list[Finding], evaluations: int) -> SearchResult:
    by_matrix: dict[Matrix, Finding] = {}
    for f in sorted(found, key=lambda f: f.index):
        if f.side_matrix not in by_matrix:
            by_matrix[f.side_matrix] = f
    ordered = sorted(by_matrix.values(), key=lambda f: (-f.violation_ratio, f.index))
    return SearchResult(findings=tuple(ordered), evaluations=evaluations)


def _hill_climb(space: SearchSpace, config: SearchConfig) -> SearchResult:
    sp = _Space.of(space)
    cells = sp.k * sp.n
    g = len(sp.grid)
    budget = config.max_evaluations
    evaluations = 0
    found: list[Finding] = []
    restart = 0
    while evaluations < budget:
        digits = tuple(_cell_draw(config.seed, restart, c) % g for c in range(cells))
        restart += 1
        ratio, finding = _evaluate(sp, config.target, digits, evaluations)
        evaluations += 1
        if finding is not None:
            found.append(finding)
        improved = True
        while improved and evaluations < budget:
            improved = False
            # First-improvement scan over single-cell grid steps; plateaus
            # (equal ratio) are rejected so the walk cannot cycle.
            for cell in range(cells):
                if evaluations >= budget:
                    break
                for step in (-1, 1):
                    di = digits[cell] + step
                    if not 0 <= di < g:
                        continue
                    cand = digits[:cell] + (di,) + digits[cell + 1 :]
                    cand_ratio, cand_finding = _evaluate(sp, config.target, cand, evaluations)
                    evaluations += 1
                    if cand_finding is not None:
                        found.append(cand_finding)
                    if cand_ratio > ratio:
                        digits, ratio = cand, cand_ratio
                        improved = True
                        break
                    if evaluations >= budget:
                        break
                if improved:
                    break
    return _finish(found, evaluations)


def search(space: SearchSpace, config: SearchConfig, *, jobs: int = 1) -> SearchResult:
    """Run the configured search; output is a pure function of (space, config).

    ``jobs`` > 1 splits grid and random scans into contiguous index chunks
    evaluated in worker processes; chunk results are merged in index order, so
    the outcome is identical for every worker count.  Hill-climb walks are
    sequential by nature and ignore ``jobs``.
    """
    _check_target(space, config)
    if config.mode == HILL_CLIMB:
        return _hill_climb(space, config)

    if config.mode == EXHAUSTIVE:
        g = len(space.side_grid)
        total = g ** (space.k * space.n)
        count = min(total, config.max_evaluations)
    else:
        count = config.max_evaluations

    jobs = max(1, int(jobs))
    if jobs == 1 or count < 2 * jobs:
        found = _scan_range(space, config, 0, count)
        return _finish(found, count)

    bounds = [count * i // jobs for i in range(jobs + 1)]
    chunks = [(bounds[i], bounds[i + 1]) for i in range(jobs)]
    try:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(_scan_range, [space] * jobs, [config] * jobs, *zip(*chunks))
            )
    except (OSError, PermissionError):
        # Restricted environments may forbid worker processes; the sequential
        # result is identical by construction.
        parts = [_scan_range(space, config, a, b) for a, b in chunks]
    found = [f for part in parts for f in part]
    return _finish(found, count)


def verify_finding(f: Finding) -> bool:
    """Re-derive a Finding through the polarization route.

    Boxes are rebuilt from the side matrix, the full volume polynomial is
    recomputed without permanents, and the certificate plus ratio must match
    exactly.  The search hot path never touches this code.
    """
    try:
        boxes = tuple(AxisBox.from_lengths(row) for row in f.side_matrix)
        vp = volume_polynomial(BodyTuple(boxes))
    except (ValueError, TypeError):
        return False
    if not recheck_certificate(vp, f.certificate):
        return False
    return f.violation_ratio == f.certificate.rhs / f.certificate.lhs


# ---------------------------------------------------------------------------
# Streaming serialization


def result_to_jsonl(result: SearchResult) -> str:
    """One Finding per line, then a summary record terminating the stream."""
    lines = [json.dumps(f.to_json(), separators=(",", ":")) for f in result.findings]
    summary = {
        "summary": True,
        "evaluations": result.evaluations,
        "findings": len(result.findings),
        "best_ratio": format_rational(result.best_ratio) if result.findings else None,
    }
    lines.append(json.dumps(summary, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def findings_from_jsonl(text: str) -> tuple[list[Finding], dict | None]:
    """Parse a findings stream; returns (findings, summary record or None)."""
    findings: list[Finding] = []
    summary: dict | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        doc = json.loads(line)
        if isinstance(doc, dict) and doc.get("summary"):
            summary = doc
        else:
            findings.append(Finding.from_json(doc))
    return findings, summary
