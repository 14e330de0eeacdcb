"""Shared generators for randomised tests (seeded, exact-rational only)."""

from __future__ import annotations

import random
from fractions import Fraction

from vcsplab.foundation import (
    Constraint,
    CostFunction,
    Domain,
    ValuedLanguage,
    VcspInstance,
    all_tuples,
)


def random_cost_function(rng: random.Random, name: str, arity: int, domain: Domain,
                         max_num: int = 6, max_den: int = 3) -> CostFunction:
    table = tuple(Fraction(rng.randint(0, max_num), rng.randint(1, max_den))
                  for _ in range(domain.size ** arity))
    return CostFunction(name, arity, domain, table)


def random_language(rng: random.Random, domain: Domain, num_functions: int,
                    max_arity: int, **kwargs) -> ValuedLanguage:
    functions = tuple(
        random_cost_function(rng, f"f{i}", rng.randint(1, max_arity), domain, **kwargs)
        for i in range(num_functions)
    )
    return ValuedLanguage(domain, functions)


def random_instance(rng: random.Random, language: ValuedLanguage, num_vars: int,
                    num_constraints: int) -> VcspInstance:
    variables = tuple(f"x{i}" for i in range(num_vars))
    constraints = []
    for _ in range(num_constraints):
        f = rng.choice(language.functions)
        scope = tuple(rng.choice(variables) for _ in range(f.arity))
        weight = Fraction(rng.randint(1, 4), rng.randint(1, 2))
        constraints.append(Constraint(weight, f, scope))
    return VcspInstance(language.domain, variables, tuple(constraints))


def inflate_language(language: ValuedLanguage, copies_of_last: int = 1) -> ValuedLanguage:
    """Blow up the domain by duplicating the last element; the result is
    never a core (identifying the duplicates never changes any cost)."""
    old = language.domain.size
    new_domain = Domain(old + copies_of_last)

    def collapse(x: int) -> int:
        return min(x, old - 1)

    functions = []
    for f in language.functions:
        table = tuple(f.evaluate(tuple(collapse(x) for x in t))
                      for t in all_tuples(new_domain.size, f.arity))
        functions.append(CostFunction(f.name, f.arity, new_domain, table))
    return ValuedLanguage(new_domain, tuple(functions))


def boolean_basics():
    """The standard Boolean test languages.

    xor rewards unequal arguments (the Max-Cut shape, NP-hard); g2 charges
    only the pair (1,0) (submodular, tractable); u0/u1 pin the elements so
    both languages are cores.
    """
    D = Domain(2)
    xor = CostFunction.from_callable("xor", 2, D, lambda x, y: 0 if x != y else 1)
    g2 = CostFunction.from_callable("g2", 2, D, lambda x, y: 1 if (x, y) == (1, 0) else 0)
    u0 = CostFunction.from_callable("u0", 1, D, lambda x: x)
    u1 = CostFunction.from_callable("u1", 1, D, lambda x: 1 - x)
    return D, xor, g2, u0, u1
