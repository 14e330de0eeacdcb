"""The basic LP relaxation: construction, exact solving, integral
extraction by value-preserving self-reduction, and the brute-force oracle.

Per constraint i the relaxation carries one local distribution over maps
sigma_i from the *set* of scope variables to D (repeats in a scope are
collapsed), tied to per-variable marginals mu by exact marginalisation
rows.  The relaxation value is always a lower bound on the true optimum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .caps import Caps, DESK
from .errors import VcspError, VerificationError
from .exactlp import EQ, LinearProgram, LpRow, solve_lp
from .foundation import VcspInstance, all_tuples, instance_value


@dataclass(frozen=True)
class BlpVariables:
    """Column layout of the relaxation."""

    mu_index: dict  # (variable, value) -> column
    lambda_index: dict  # (constraint idx, local assignment tuple) -> column
    scope_sets: tuple[tuple[str, ...], ...]  # per constraint, distinct scope vars in first-occurrence order
    num_cols: int


def _layout(instance: VcspInstance, caps: Caps) -> BlpVariables:
    size = instance.domain.size
    mu_index = {}
    col = 0
    for x in instance.variables:
        for a in range(size):
            mu_index[(x, a)] = col
            col += 1
    lambda_index = {}
    scope_sets = []
    total_lambda = 0
    for i, c in enumerate(instance.constraints):
        seen = []
        for v in c.scope:
            if v not in seen:
                seen.append(v)
        scope_sets.append(tuple(seen))
        total_lambda += size ** len(seen)
        caps.check_states(total_lambda + col, "relaxation variables")
        for sigma in all_tuples(size, len(seen)):
            lambda_index[(i, sigma)] = col
            col += 1
    return BlpVariables(mu_index, lambda_index, tuple(scope_sets), col)


def build_blp(instance: VcspInstance, *, caps: Caps = DESK) -> LinearProgram:
    """The relaxation as an explicit program: marginalisation rows, one
    normalisation row per variable, box bounds on every column."""
    layout = _layout(instance, caps)
    size = instance.domain.size
    ncols = layout.num_cols
    objective = [Fraction(0)] * ncols
    for i, c in enumerate(instance.constraints):
        scope_set = layout.scope_sets[i]
        pos = {v: j for j, v in enumerate(scope_set)}
        for sigma in all_tuples(size, len(scope_set)):
            args = tuple(sigma[pos[v]] for v in c.scope)
            objective[layout.lambda_index[(i, sigma)]] += c.weight * c.function.evaluate(args)
    rows = []
    for i, c in enumerate(instance.constraints):
        scope_set = layout.scope_sets[i]
        pos = {v: j for j, v in enumerate(scope_set)}
        for x in scope_set:
            for a in range(size):
                coeffs = [Fraction(0)] * ncols
                for sigma in all_tuples(size, len(scope_set)):
                    if sigma[pos[x]] == a:
                        coeffs[layout.lambda_index[(i, sigma)]] = Fraction(1)
                coeffs[layout.mu_index[(x, a)]] = Fraction(-1)
                rows.append((coeffs, EQ, 0))
    for x in instance.variables:
        coeffs = [Fraction(0)] * ncols
        for a in range(size):
            coeffs[layout.mu_index[(x, a)]] = Fraction(1)
        rows.append((coeffs, EQ, 1))
    return LinearProgram.build(ncols, objective=objective, rows=rows,
                               upper=[Fraction(1)] * ncols)


@dataclass(frozen=True)
class BlpSolution:
    value: Fraction
    mu: dict  # (variable, value) -> Fraction
    lam: dict  # (constraint idx, local assignment tuple) -> Fraction
    integral: bool


def solve_blp(instance: VcspInstance, *, caps: Caps = DESK) -> BlpSolution:
    layout = _layout(instance, caps)
    program = build_blp(instance, caps=caps)
    outcome = solve_lp(program)
    if outcome.status != "optimal":  # pragma: no cover - relaxation is always feasible and bounded
        raise VcspError(f"relaxation solve returned {outcome.status}")
    x = outcome.primal
    mu = {key: x[col] for key, col in layout.mu_index.items()}
    lam = {key: x[col] for key, col in layout.lambda_index.items()}
    _check_marginals(instance, layout, mu, lam)
    integral = all(v == 0 or v == 1 for v in mu.values())
    return BlpSolution(value=outcome.value, mu=mu, lam=lam, integral=integral)


def _check_marginals(instance, layout, mu, lam):
    size = instance.domain.size
    for x in instance.variables:
        if sum((mu[(x, a)] for a in range(size)), Fraction(0)) != 1:
            raise VerificationError("marginals do not normalise")
    for i in range(len(instance.constraints)):
        scope_set = layout.scope_sets[i]
        pos = {v: j for j, v in enumerate(scope_set)}
        for x in scope_set:
            for a in range(size):
                total = sum((lam[(i, sigma)] for sigma in all_tuples(size, len(scope_set))
                             if sigma[pos[x]] == a), Fraction(0))
                if total != mu[(x, a)]:
                    raise VerificationError("marginalisation row violated")
    for v in itertools.chain(mu.values(), lam.values()):
        if not 0 <= v <= 1:
            raise VerificationError("relaxation variable outside [0,1]")


def _blp_value_with_pins(instance: VcspInstance, pins: dict, caps: Caps) -> Fraction:
    """Relaxation value with mu(x,a) = 1 forced for each pinned (x, a)."""
    layout = _layout(instance, caps)
    program = build_blp(instance, caps=caps)
    rows = list(program.rows)
    ncols = program.num_vars
    for x, a in pins.items():
        coeffs = [Fraction(0)] * ncols
        coeffs[layout.mu_index[(x, a)]] = Fraction(1)
        rows.append(LpRow(tuple(coeffs), EQ, Fraction(1)))
    pinned = LinearProgram(ncols, program.objective, tuple(rows), program.lower, program.upper)
    outcome = solve_lp(pinned)
    if outcome.status != "optimal":
        raise VcspError("pinned relaxation became infeasible")
    return outcome.value


def extract_assignment(instance: VcspInstance, *, caps: Caps = DESK) -> tuple[dict, Fraction]:
    """Round the relaxation by self-reduction: pin variables one by one to
    the first value that keeps the relaxation value unchanged.

    Sound whenever the relaxation is tight on every sub-instance, which
    the classifier guarantees for languages with a tractable witness; on
    other inputs the value-preservation check fails and this raises.
    """
    base = solve_blp(instance, caps=caps).value
    pins: dict = {}
    size = instance.domain.size
    for x in instance.variables:
        chosen = None
        for a in range(size):
            pins[x] = a
            try:
                v = _blp_value_with_pins(instance, pins, caps)
            except VcspError:
                v = None
            if v == base:
                chosen = a
                break
        if chosen is None:
            raise VcspError(f"no value of {x!r} preserves the relaxation value; "
                            "language is not tractable or caps were violated")
        pins[x] = chosen
    if instance_value(instance, pins) != base:
        raise VerificationError("extracted assignment does not attain the relaxation value")
    return pins, base


def brute_force_solve(instance: VcspInstance, *, caps: Caps = DESK) -> tuple[dict, Fraction]:
    """Exact minimum by exhaustive enumeration; ties resolve to the
    lexicographically least assignment in declaration order."""
    size = instance.domain.size
    caps.check_states(size ** len(instance.variables), "assignment enumeration")
    best = None
    best_assignment = None
    for values in all_tuples(size, len(instance.variables)):
        h = dict(zip(instance.variables, values))
        v = instance_value(instance, h)
        if best is None or v < best:
            best = v
            best_assignment = h
    if best is None:  # no variables
        return {}, instance_value(instance, {})
    return best_assignment, best
