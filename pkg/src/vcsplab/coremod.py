"""Core detection and extraction via the unary-polymorphism LP, and the
witness instance in which every domain element is forced into every
optimal solution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .caps import Caps, DESK
from .errors import VcspError, VerificationError
from .exactlp import AlternativeSystem, motzkin_alternative
from .foundation import (
    Constraint,
    FractionalOperation,
    Operation,
    ValuedLanguage,
    VcspInstance,
    all_tuples,
    instance_value,
    is_injective,
)
from .langops import RestrictedLanguage, check_fractional_polymorphism, restrict_language


@dataclass(frozen=True)
class CoreReport:
    is_core: bool
    # when not a core: a unary fractional polymorphism with non-injective support
    witness: Optional[FractionalOperation] = None
    # when extraction was requested: the surviving subset of the original domain
    core_subset: Optional[tuple[int, ...]] = None
    core_language: Optional[ValuedLanguage] = None


def _unary_operations(language: ValuedLanguage) -> list[Operation]:
    size = language.domain.size
    return [Operation.from_unary_images(language.domain, images)
            for images in all_tuples(size, size)]


def _core_system(language: ValuedLanguage, ops: list[Operation]) -> AlternativeSystem:
    # strict block: total weight on non-injective operations must be positive;
    # weak block: one row per (f, xbar) stating the improvement inequality.
    strict = [tuple(Fraction(0 if is_injective(g) else 1) for g in ops)]
    weak = []
    size = language.domain.size
    for f in language.functions:
        for xbar in all_tuples(size, f.arity):
            fx = f.evaluate(xbar)
            weak.append(tuple(fx - f.evaluate(tuple(g.apply1((x,)) for x in xbar))
                              for g in ops))
    return AlternativeSystem.make(strict, weak)


def _witness_keys(language: ValuedLanguage):
    size = language.domain.size
    for f in language.functions:
        for xbar in all_tuples(size, f.arity):
            yield f, xbar


def is_core(language: ValuedLanguage, *, caps: Caps = DESK) -> CoreReport:
    """Decide core-ness; a negative answer carries a verified witness."""
    size = language.domain.size
    caps.check_domain(size)
    caps.check_states(size ** size, "unary operation enumeration")
    ops = _unary_operations(language)
    result = motzkin_alternative(_core_system(language, ops))
    if result.strict_solution is None:
        return CoreReport(is_core=True)
    y = result.strict_solution
    total = sum(y, Fraction(0))
    omega = FractionalOperation.make([(g, w / total) for g, w in zip(ops, y) if w > 0])
    check = check_fractional_polymorphism(language, omega)
    if not check.holds:
        raise VerificationError("non-core witness fails the polymorphism inequality")
    if all(is_injective(g) for g in omega.support()):
        raise VerificationError("non-core witness has purely injective support")
    return CoreReport(is_core=False, witness=omega)


def find_core(language: ValuedLanguage, *, caps: Caps = DESK) -> CoreReport:
    """Contract along non-injective witness operations until a core remains.

    Among the witness's non-injective support operations, the one with the
    smallest image is used (ties broken by lexicographic table order); the
    returned subset lives in the original domain.
    """
    current = language
    embedding = tuple(range(language.domain.size))
    for _ in range(language.domain.size):
        report = is_core(current, caps=caps)
        if report.is_core:
            return CoreReport(is_core=(current is language),
                              witness=None,
                              core_subset=embedding,
                              core_language=current)
        candidates = [g for g in report.witness.support() if not is_injective(g)]
        h = min(candidates, key=lambda g: (len(g.image()), g.table))
        restricted = restrict_language(current, h.image())
        embedding = tuple(embedding[a] for a in restricted.embedding)
        current = restricted.language
    raise VerificationError("core contraction failed to terminate")  # pragma: no cover


def core_witness_instance(language: ValuedLanguage, *, caps: Caps = DESK) -> VcspInstance:
    """Instance on variables {v_a : a in D} in which every domain element
    appears in every optimal solution; exists exactly when the language is
    a core, with weights read off the core LP's dual certificate."""
    size = language.domain.size
    caps.check_domain(size)
    caps.check_states(size ** size, "unary operation enumeration")
    ops = _unary_operations(language)
    result = motzkin_alternative(_core_system(language, ops))
    if result.certificate is None:
        raise VcspError("language is not a core; no witness instance exists")
    _, z2 = result.certificate
    variables = tuple(f"v{a}" for a in range(size))
    constraints = []
    for (f, xbar), w in zip(_witness_keys(language), z2):
        if w > 0:
            constraints.append(Constraint(w, f, tuple(f"v{a}" for a in xbar)))
    instance = VcspInstance(language.domain, variables, tuple(constraints))
    _verify_witness_instance(instance, size, caps)
    return instance


def _verify_witness_instance(instance: VcspInstance, size: int, caps: Caps):
    caps.check_states(size ** size, "witness verification")
    best = None
    optima = []
    for images in all_tuples(size, size):
        h = {f"v{a}": images[a] for a in range(size)}
        v = instance_value(instance, h)
        if best is None or v < best:
            best = v
            optima = [images]
        elif v == best:
            optima.append(images)
    for images in optima:
        if len(set(images)) != size:
            raise VerificationError("witness instance admits an optimal solution missing a domain element")


def substitute_language(instance: VcspInstance, restricted: RestrictedLanguage) -> VcspInstance:
    """Rewrite an instance over the restriction of its language (same
    variables, scopes and weights, restricted function tables)."""
    lookup = {f.name: f for f in restricted.language.functions}
    constraints = tuple(Constraint(c.weight, lookup[c.function.name], c.scope)
                        for c in instance.constraints)
    return VcspInstance(restricted.language.domain, instance.variables, constraints)
