import random
from fractions import Fraction

import pytest

from vcsplab.errors import VcspError
from vcsplab.exactlp import (
    EQ,
    GE,
    LE,
    AlternativeSystem,
    LinearProgram,
    dump_lp,
    motzkin_alternative,
    solve_lp,
)


def test_optimal_with_dual():
    # min x + y  s.t. x + y >= 3, x - y <= 1
    lp = LinearProgram.build(2, objective=[1, 1],
                             rows=[([1, 1], GE, 3), ([1, -1], LE, 1)])
    out = solve_lp(lp)
    assert out.status == "optimal"
    assert out.value == 3
    assert sum(y * r.rhs for y, r in zip(out.dual, lp.rows)) == 3
    assert out.dual[0] >= 0 and out.dual[1] <= 0


def test_infeasible_farkas():
    # x >= 2 and x <= 1
    lp = LinearProgram.build(1, rows=[([1], GE, 2), ([1], LE, 1)])
    out = solve_lp(lp)
    assert out.status == "infeasible"
    y = out.farkas
    assert y[0] >= 0 and y[1] <= 0
    assert y[0] * 2 + y[1] * 1 > 0
    assert y[0] * 1 + y[1] * 1 <= 0  # combined column coefficient


def test_unbounded_ray():
    lp = LinearProgram.build(1, objective=[-1])
    out = solve_lp(lp)
    assert out.status == "unbounded"
    assert out.ray[0] > 0


def test_free_variables_and_upper_bounds():
    # min x + y, x free with x >= -5 not imposed: x free, y in [0, 2], x + y = 1
    lp = LinearProgram.build(2, objective=[1, -1],
                             rows=[([1, 1], EQ, 1)],
                             lower=[None, 0], upper=[None, 2])
    out = solve_lp(lp)
    assert out.status == "optimal"
    # push y to its upper bound 2, x = -1
    assert out.primal == (-1, 2)
    assert out.value == -3


def test_equality_rows_free_dual():
    lp = LinearProgram.build(2, objective=[2, 3], rows=[([1, 1], EQ, 4)])
    out = solve_lp(lp)
    assert out.status == "optimal"
    assert out.value == 8
    assert out.primal == (4, 0)


def test_degenerate_redundant_rows():
    lp = LinearProgram.build(2, objective=[1, 1],
                             rows=[([1, 1], EQ, 2), ([2, 2], EQ, 4), ([1, 1], GE, 2)])
    out = solve_lp(lp)
    assert out.status == "optimal"
    assert out.value == 2


def test_determinism():
    lp = LinearProgram.build(3, objective=[1, 2, 0],
                             rows=[([1, 1, 1], GE, 2), ([1, -1, 0], LE, 1)])
    assert solve_lp(lp) == solve_lp(lp)


def test_dump_lp():
    lp = LinearProgram.build(2, objective=[1, 0], rows=[([1, -1], GE, Fraction(1, 2))],
                             lower=[0, None], upper=[3, None])
    text = dump_lp(lp)
    assert "min 1 x0" in text
    assert "1/2" in text
    assert "-inf <= x1" in text


def test_motzkin_strict_branch():
    system = AlternativeSystem.make([[1, 0]], [[0, 1]])
    result = motzkin_alternative(system)
    assert result.certificate is None
    y = result.strict_solution
    assert y[0] > 0 and y[1] >= 0


def test_motzkin_certificate_branch():
    # y >= 0 with y > 0 and -y > 0 impossible
    system = AlternativeSystem.make([[1], [-1]])
    result = motzkin_alternative(system)
    assert result.strict_solution is None
    z1, z2 = result.certificate
    assert any(v > 0 for v in z1)
    assert z2 == ()


def test_alternative_system_validation():
    with pytest.raises(VcspError):
        AlternativeSystem.make([])
    with pytest.raises(VcspError):
        AlternativeSystem.make([[1, 2]], [[1]])


def _check_motzkin(system: AlternativeSystem, result) -> None:
    """Independent substitution check of whichever branch was returned."""
    A, B = system.strict, system.weak
    if result.strict_solution is not None:
        y = result.strict_solution
        assert all(v >= 0 for v in y)
        for row in A:
            assert sum(c * v for c, v in zip(row, y)) > 0
        for row in B:
            assert sum(c * v for c, v in zip(row, y)) >= 0
        assert result.certificate is None
    else:
        z1, z2 = result.certificate
        assert all(v >= 0 for v in z1) and any(v > 0 for v in z1)
        assert all(v >= 0 for v in z2)
        for j in range(system.num_vars):
            combo = sum(z1[i] * A[i][j] for i in range(len(A)))
            combo += sum(z2[i] * B[i][j] for i in range(len(B)))
            assert combo <= 0


def test_motzkin_random_systems():
    rng = random.Random(20240817)
    for _ in range(120):
        n = rng.randint(1, 4)
        A = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
             for _ in range(rng.randint(1, 3))]
        B = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
             for _ in range(rng.randint(0, 3))]
        system = AlternativeSystem.make(A, B)
        _check_motzkin(system, motzkin_alternative(system))


def test_random_lps_verify():
    # the solver self-verifies every certificate; this exercises all paths
    rng = random.Random(7)
    statuses = set()
    for _ in range(150):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        rows = []
        for _ in range(m):
            rel = rng.choice([LE, GE, EQ])
            rows.append(([Fraction(rng.randint(-3, 3)) for _ in range(n)],
                         rel, Fraction(rng.randint(-4, 4))))
        objective = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        lower = [None if rng.random() < 0.2 else Fraction(0) for _ in range(n)]
        upper = [Fraction(rng.randint(1, 5)) if rng.random() < 0.3 else None
                 for _ in range(n)]
        out = solve_lp(LinearProgram.build(n, objective, rows, lower, upper))
        statuses.add(out.status)
    assert statuses == {"optimal", "infeasible", "unbounded"}
