"""Small exact linear-algebra helpers (dense, Fraction-valued)."""

from __future__ import annotations

from fractions import Fraction

from .errors import VcspError


def gauss_solve(matrix, rhs) -> list[Fraction]:
    """Solve M x = b exactly for square, nonsingular M.

    M is a list of rows of Fractions; b a list of Fractions.  Raises
    VcspError if M is singular.
    """
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise VcspError("singular matrix in gauss_solve")
        a[col], a[pivot] = a[pivot], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * p for v, p in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def assert_equal_under_convex_domination(values, coefficients) -> None:
    """If x_j >= sum_i c_i x_i for all j with convex positive c, all x_j are equal.

    Used as a runtime assertion wherever that inequality pattern is derived.
    """
    if len(values) != len(coefficients):
        raise VcspError("values and coefficients must align")
    total = sum(coefficients, Fraction(0))
    if total != 1 or any(c <= 0 for c in coefficients):
        raise VcspError("coefficients must be positive and sum to 1")
    mean = sum((c * x for c, x in zip(coefficients, values)), Fraction(0))
    for x in values:
        if x < mean:
            raise VcspError("domination hypothesis violated")
    if any(x != values[0] for x in values):
        raise VcspError("convex domination must force equality; found distinct values")
