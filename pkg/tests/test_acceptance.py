"""Acceptance gate: one test per release criterion, in order.

Each test prints a single PASS/FAIL line (run with ``-s`` to see them on
success) and asserts the criterion at its stated tolerance, which is exact
equality everywhere.  Timed criteria use wall-clock bounds sized for an
ordinary desktop; they are generous, not tight.
"""

import json
import random
from fractions import Fraction
from math import factorial
from time import perf_counter

from mixedvol.bodies import AxisBox, Zonotope
from mixedvol.cli import EXIT_FAILS, run
from mixedvol.inequalities import (
    FAILS,
    HOLDS,
    af_check_discriminants,
    af_check_volumes,
    gromov_concavity,
    gromov_triple_check,
    segment_concavity,
    vdw_check,
)
from mixedvol.mixed import (
    BodyTuple,
    MatrixTuple,
    discriminant_polynomial,
    mixed_discriminant,
    mixed_volume,
    mixed_volume_boxes,
    volume_polynomial,
    volume_polynomial_interpolated,
)
from mixedvol.numerics import Matrix, SymMatrix, permanent
from mixedvol.search import (
    EXHAUSTIVE,
    RANDOM,
    SearchConfig,
    SearchSpace,
    search,
    verify_finding,
)

A1 = AxisBox.from_lengths([1, 1, 0])
A2 = AxisBox.from_lengths([1, 0, 5])
A3 = AxisBox.from_lengths([0, Fraction(1, 3), 1])


def _conclude(num: int, label: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" [{detail}]"
    print(line)
    assert ok, line


def _grid_side(rng: random.Random) -> Fraction:
    # A rational from the [0, 5] grid with small denominator.
    den = rng.choice((1, 2, 3))
    return Fraction(rng.randint(0, 5 * den), den)


def test_criterion_1_counterexample_exact():
    t0 = perf_counter()
    values_ok = (
        mixed_volume([A1, A2, A3]) == Fraction(4, 9)
        and mixed_volume([A1, A1, A2]) == Fraction(5, 3)
        and mixed_volume([A2, A2, A3]) == Fraction(5, 9)
        and mixed_volume([A3, A3, A1]) == Fraction(1, 9)
    )
    report = gromov_triple_check([A1, A2, A3])
    cert = report.certificates[0] if report.certificates else None
    comparison_ok = (
        report.verdict == FAILS
        and cert is not None
        and cert.lhs == Fraction(64, 729)
        and cert.rhs == Fraction(75, 729)
        and cert.lhs < cert.rhs
    )
    elapsed = perf_counter() - t0
    _conclude(
        1,
        "known counterexample, exact values",
        values_ok and comparison_ok and elapsed < 1.0,
        f"{elapsed:.3f}s",
    )


def test_criterion_2_route_agreement():
    rng = random.Random(20260818)
    t0 = perf_counter()
    ok = True
    for trial in range(200):
        n = 2 + trial % 3
        sides = [[_grid_side(rng) for _ in range(n)] for _ in range(n)]
        boxes = tuple(AxisBox.from_lengths(row) for row in sides)
        t = BodyTuple(boxes)
        by_polarization = volume_polynomial(t)
        by_interpolation = volume_polynomial_interpolated(t)
        diagonal = (1,) * n
        ok = ok and by_polarization.coefficients == by_interpolation.coefficients
        ok = ok and by_polarization[diagonal] == mixed_volume(boxes)
        ok = ok and by_polarization[diagonal] == mixed_volume_boxes(Matrix(sides))
        if not ok:
            break
    elapsed = perf_counter() - t0
    _conclude(
        2,
        "permanent = polarization = interpolation on 200 box tuples",
        ok and elapsed < 30.0,
        f"{elapsed:.2f}s",
    )


def test_criterion_3_diagonal_correspondence():
    rng = random.Random(20260819)
    ok = True
    for trial in range(100):
        n = 2 + trial % 3
        diagonals = [[_grid_side(rng) for _ in range(n)] for _ in range(n)]
        matrices = tuple(SymMatrix.diagonal(d) for d in diagonals)
        disc = mixed_discriminant(matrices)
        ok = ok and disc == permanent(Matrix(diagonals)) / factorial(n)
        boxes = BodyTuple(tuple(AxisBox.from_lengths(d) for d in diagonals))
        disc_poly = discriminant_polynomial(MatrixTuple(matrices))
        ok = ok and disc_poly.coefficients == volume_polynomial(boxes).coefficients
        if not ok:
            break
    _conclude(3, "diagonal discriminants match box volumes", ok)


def test_criterion_4_af_property_suite():
    rng = random.Random(20260820)
    ok = True
    for trial in range(200):
        n = 2 + trial % 3
        if trial % 2 == 0:
            bodies = [
                AxisBox.from_lengths([_grid_side(rng) for _ in range(n)])
                for _ in range(n)
            ]
        else:
            bodies = [
                Zonotope(n, [tuple(rng.randint(-3, 3) for _ in range(n))])
                for _ in range(n)
            ]
        ok = ok and af_check_volumes(bodies).verdict == HOLDS
        if not ok:
            break
    for _ in range(100):
        if not ok:
            break
        matrices = []
        for _ in range(3):
            m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
            gram = [
                [sum(m[t][i] * m[t][j] for t in range(3)) for j in range(3)]
                for i in range(3)
            ]
            for i in range(3):
                gram[i][i] += 1
            matrices.append(SymMatrix(gram))
        ok = ok and af_check_discriminants(matrices).verdict == HOLDS
    _conclude(4, "squared comparison holds on 300 random tuples", ok)


def test_criterion_5_pair_envelope_matches_segments():
    grid = [Fraction(v) for v in range(4)]
    ok = True
    checked = 0
    for s1 in grid:
        for s2 in grid:
            for s3 in grid:
                for s4 in grid:
                    t = BodyTuple((
                        AxisBox.from_lengths([s1, s2]),
                        AxisBox.from_lengths([s3, s4]),
                    ))
                    vp = volume_polynomial(t)
                    ok = ok and gromov_concavity(vp).verdict == segment_concavity(vp).verdict
                    checked += 1
    _conclude(
        5,
        "two-body envelope verdict equals edge verdict",
        ok and checked == 256,
        f"{checked} pairs",
    )


def test_criterion_6_permanent_margin():
    ok = True
    for n in range(2, 7):
        uniform = Matrix([[Fraction(1, n)] * n] * n)
        ok = ok and vdw_check(uniform).margin == 0
    rng = random.Random(20260821)
    for _ in range(100):
        if not ok:
            break
        n = rng.randint(2, 5)
        terms = rng.randint(2, 6)
        weights = [rng.randint(1, 9) for _ in range(terms)]
        total = sum(weights)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for w in weights:
            perm_cols = list(range(n))
            rng.shuffle(perm_cols)
            for i, j in enumerate(perm_cols):
                rows[i][j] += Fraction(w, total)
        result = vdw_check(Matrix(rows))
        ok = ok and result.holds and result.margin >= 0
    _conclude(6, "doubly stochastic permanent floor", ok)


def test_criterion_7_search_rediscovery():
    t0 = perf_counter()
    space = SearchSpace(side_grid=(0, Fraction(1, 3), 1, 5))
    result = search(space, SearchConfig(mode=EXHAUSTIVE))
    target = Matrix([[1, 1, 0], [1, 0, 5], [0, Fraction(1, 3), 1]])
    hits = [f for f in result if f.side_matrix == target]
    verified = all(verify_finding(f) for f in result)
    elapsed = perf_counter() - t0
    ok = (
        len(result) >= 1
        and verified
        and len(hits) == 1
        and hits[0].violation_ratio == Fraction(75, 64)
        and elapsed < 300.0
    )
    _conclude(
        7,
        "exhaustive search rediscovers the flat triple",
        ok,
        f"{len(result)} findings, {elapsed:.1f}s",
    )


def test_criterion_8_search_determinism(tmp_path):
    outputs = []
    for jobs, name in ((1, "a"), (1, "b"), (4, "c")):
        path = tmp_path / f"{name}.jsonl"
        argv = [
            "search",
            "--grid", "0,1/3,1,5",
            "--mode", RANDOM,
            "--seed", "20260818",
            "--max-evaluations", "5000",
            "--jobs", str(jobs),
            "--format", "json",
            "--output", str(path),
        ]
        code = run(argv)
        outputs.append(path.read_bytes())
    ok = (
        code == EXIT_FAILS
        and outputs[0] == outputs[1] == outputs[2]
        and json.loads(outputs[0].splitlines()[-1])["findings"] > 0
    )
    _conclude(8, "byte-identical streams across runs and job counts", ok)


def test_criterion_9_permanent_performance():
    rng = random.Random(20260822)
    m = Matrix([
        [Fraction(rng.randint(10, 99), rng.randint(10, 99)) for _ in range(10)]
        for _ in range(10)
    ])
    t0 = perf_counter()
    value = permanent(m)
    elapsed = perf_counter() - t0
    _conclude(
        9,
        "dense 10x10 rational permanent under a second",
        value > 0 and elapsed < 1.0,
        f"{elapsed:.3f}s",
    )
