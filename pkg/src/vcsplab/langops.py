"""Language-level constructions: expressibility, restriction, pinning, and
the fractional-polymorphism inequality checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .caps import Caps, DESK
from .errors import VcspError
from .foundation import (
    CostFunction,
    Domain,
    FractionalOperation,
    ValuedLanguage,
    VcspInstance,
    all_tuples,
    apply_componentwise,
    instance_value,
    tuple_index,
)


@dataclass(frozen=True)
class ExpressedFunction:
    """A cost function together with the instance that expresses it."""

    function: CostFunction
    instance: VcspInstance
    kept: tuple[str, ...]


def min_projection(instance: VcspInstance, kept: Sequence[str], *,
                   name: Optional[str] = None, caps: Caps = DESK) -> ExpressedFunction:
    """Project an instance's objective onto `kept` by minimising out the rest.

    The table entry at a kept-tuple t is the exact minimum of the instance
    measure over all assignments extending t.
    """
    kept = tuple(kept)
    declared = set(instance.variables)
    for v in kept:
        if v not in declared:
            raise VcspError(f"kept variable {v!r} not in the instance")
    if len(set(kept)) != len(kept):
        raise VcspError("kept variables must be distinct")
    size = instance.domain.size
    caps.check_states(size ** len(instance.variables), "projection enumeration")
    eliminated = tuple(v for v in instance.variables if v not in set(kept))
    table = []
    for t in all_tuples(size, len(kept)):
        best = None
        base = dict(zip(kept, t))
        for rest in all_tuples(size, len(eliminated)):
            base.update(zip(eliminated, rest))
            v = instance_value(instance, base)
            if best is None or v < best:
                best = v
        table.append(best)
    fname = name if name is not None else "minproj(" + ",".join(kept) + ")"
    f = CostFunction(fname, len(kept), instance.domain, tuple(table))
    return ExpressedFunction(f, instance, kept)


@dataclass(frozen=True)
class RestrictedLanguage:
    language: ValuedLanguage
    embedding: tuple[int, ...]  # new element i is original element embedding[i]


def restrict_function(f: CostFunction, subset: Sequence[int], new_domain: Domain) -> CostFunction:
    subset = tuple(subset)
    table = tuple(f.table[tuple_index(tuple(subset[i] for i in t), f.domain.size)]
                  for t in all_tuples(len(subset), f.arity))
    return CostFunction(f.name, f.arity, new_domain, table)


def restrict_language(language: ValuedLanguage, subset: Sequence[int]) -> RestrictedLanguage:
    """Induced sub-language on a nonempty subset of the domain.

    The new domain is re-indexed 0..|S|-1; the recorded embedding maps new
    elements back to the original ones (ascending order).
    """
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise VcspError("restriction subset must be nonempty")
    for a in subset:
        if not 0 <= a < language.domain.size:
            raise VcspError(f"subset element {a} outside the domain")
    labels = None
    if language.domain.labels is not None:
        labels = tuple(language.domain.labels[a] for a in subset)
    new_domain = Domain(len(subset), labels)
    functions = tuple(restrict_function(f, subset, new_domain) for f in language.functions)
    return RestrictedLanguage(ValuedLanguage(new_domain, functions), subset)


def _pin_function(f: CostFunction, positions: tuple[int, ...], values: tuple[int, ...]) -> CostFunction:
    rest = tuple(i for i in range(f.arity) if i not in positions)
    fixed = dict(zip(positions, values))
    size = f.domain.size
    table = []
    for t in all_tuples(size, len(rest)):
        full = [0] * f.arity
        for i, v in fixed.items():
            full[i] = v
        for i, v in zip(rest, t):
            full[i] = v
        table.append(f.table[tuple_index(full, size)])
    pins = ",".join(f"{i}={v}" for i, v in zip(positions, values))
    return CostFunction(f"{f.name}[{pins}]", len(rest), f.domain, tuple(table))


def gamma_c(language: ValuedLanguage, *, caps: Caps = DESK) -> ValuedLanguage:
    """Add every function obtained by fixing a proper nonempty subset of
    arguments to domain values; deduplicate by exact table equality."""
    for f in language.functions:
        caps.check_arity(f.arity)
    size = language.domain.size
    seen = {(f.arity, f.table) for f in language.functions}
    out = list(language.functions)
    for f in language.functions:
        for npin in range(1, f.arity):
            for positions in itertools.combinations(range(f.arity), npin):
                for values in all_tuples(size, npin):
                    g = _pin_function(f, positions, values)
                    key = (g.arity, g.table)
                    if key not in seen:
                        seen.add(key)
                        out.append(g)
    return ValuedLanguage(language.domain, tuple(out))


def f_power_mean(f: CostFunction, tuples: Sequence[Sequence[int]]) -> Fraction:
    """Arithmetic mean of f over a family of argument tuples."""
    if not tuples:
        raise VcspError("need at least one tuple")
    total = Fraction(0)
    for t in tuples:
        total += f.evaluate(t)
    return total / len(tuples)


@dataclass(frozen=True)
class PolymorphismCheck:
    holds: bool
    function: Optional[CostFunction] = None
    tuples: Optional[tuple[tuple[int, ...], ...]] = None
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None


def check_fractional_polymorphism(language: ValuedLanguage,
                                  omega: FractionalOperation) -> PolymorphismCheck:
    """Exhaustively verify the averaged improvement inequality.

    For every f and every family of m argument tuples, the omega-weighted
    mean of f over the mapped k tuples must not exceed the mean of f over
    the input tuples.  Returns the first violation with exact values.
    """
    if omega.domain != language.domain:
        raise VcspError("fractional operation domain differs from the language's")
    m = omega.in_arity
    size = language.domain.size
    for f in language.functions:
        n = f.arity
        for family in itertools.product(all_tuples(size, n), repeat=m):
            rhs = f_power_mean(f, family)
            lhs = Fraction(0)
            for g, w in omega.items():
                outputs = apply_componentwise(g, family)
                lhs += w * f_power_mean(f, outputs)
            if lhs > rhs:
                return PolymorphismCheck(False, f, tuple(family), lhs, rhs)
    return PolymorphismCheck(True)
