"""The dichotomy pipeline: tractability LP over idempotent symmetric
binary operations, per-pair hardness-gadget extraction, the averaged
binary polymorphism combined from per-pair dual certificates, and the
constructive transform from a Max-Cut-style binary witness to the
unary/binary pair form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .caps import Caps, DESK
from .errors import (
    CapExceeded,
    InconclusiveUnderCap,
    InternalInconsistency,
    VcspError,
    VerificationError,
)
from .exactlp import AlternativeSystem, EQ, LE, LinearProgram, motzkin_alternative, solve_lp
from .foundation import (
    Constraint,
    CostFunction,
    Domain,
    FractionalOperation,
    Operation,
    UnaryFunctionPair,
    ValuedLanguage,
    VcspInstance,
    all_tuples,
    apply_componentwise,
    op_predicates,
)
from .langops import check_fractional_polymorphism, f_power_mean, gamma_c, min_projection
from .coremod import find_core, is_core


def idempotent_symmetric_binary_ops(domain: Domain) -> list[Operation]:
    """All binary idempotent symmetric operations, in lexicographic order
    of their free values on unordered pairs (the diagonal is forced)."""
    size = domain.size
    pairs = [(x, y) for x in range(size) for y in range(x + 1, size)]
    ops = []
    for values in all_tuples(size, len(pairs)):
        assign = dict(zip(pairs, values))
        table = []
        for x, y in itertools.product(range(size), repeat=2):
            if x == y:
                table.append((x,))
            else:
                table.append((assign[(x, y) if x < y else (y, x)],))
        ops.append(Operation(2, 1, domain, tuple(table)))
    return ops


def tractability_lp(language: ValuedLanguage, *, caps: Caps = DESK,
                    check_core: bool = True) -> Optional[FractionalOperation]:
    """Search for a binary idempotent symmetric fractional polymorphism.

    Feasibility of the improvement inequalities over the idempotent
    symmetric operations, normalised to total weight 1.  Returns a
    verified witness or None.
    """
    caps.check_domain(language.domain.size)
    if check_core and not is_core(language, caps=caps).is_core:
        raise VcspError("tractability LP expects a core language")
    ops = idempotent_symmetric_binary_ops(language.domain)
    size = language.domain.size
    rows = []
    for f in language.functions:
        n = f.arity
        for x1 in all_tuples(size, n):
            for x2 in all_tuples(size, n):
                mean = f_power_mean(f, (x1, x2))
                coeffs = []
                for g in ops:
                    out = apply_componentwise(g, (x1, x2))[0]
                    coeffs.append(f.evaluate(out) - mean)
                rows.append((coeffs, LE, 0))
    rows.append(([Fraction(1)] * len(ops), EQ, 1))
    outcome = solve_lp(LinearProgram.build(len(ops), rows=rows))
    if outcome.status == "infeasible":
        return None
    omega = FractionalOperation.make([(g, w) for g, w in zip(ops, outcome.primal) if w > 0])
    _verify_tractable_witness(language, omega)
    return omega


def _verify_tractable_witness(language: ValuedLanguage, omega: FractionalOperation):
    for g in omega.support():
        preds = op_predicates(g)
        if not (preds.idempotent and preds.symmetric):
            raise VerificationError("tractable witness operation is not idempotent symmetric")
    check = check_fractional_polymorphism(language, omega)
    if not check.holds:
        raise VerificationError("tractable witness fails the polymorphism inequality")


def _binary_ops(domain: Domain, caps: Caps) -> list[Operation]:
    size = domain.size
    count = size ** (size * size)
    if count > caps.binary_ops:
        raise CapExceeded(f"{count} binary operations exceed cap {caps.binary_ops}")
    return [Operation(2, 1, domain, tuple((v,) for v in values))
            for values in all_tuples(size, size * size)]


def _swap_op(g: Operation) -> Operation:
    size = g.domain.size
    table = tuple((g.apply1((y, x)),) for x, y in all_tuples(size, 2))
    return Operation(2, 1, g.domain, table)


def _gadget_columns(language: ValuedLanguage):
    size = language.domain.size
    for f in language.functions:
        for x1 in all_tuples(size, f.arity):
            for x2 in all_tuples(size, f.arity):
                yield f, x1, x2


@dataclass(frozen=True)
class PairOutcome:
    """Result of the per-pair meta LP: either a concrete hardness gadget
    with its projected binary function, or the dual certificate (a binary
    fractional polymorphism moving the pair)."""

    pair: tuple[int, int]
    gadget: Optional[VcspInstance] = None
    h: Optional[CostFunction] = None
    certificate: Optional[FractionalOperation] = None


def pair_hardness_gadget(language: ValuedLanguage, a: int, b: int, *,
                         caps: Caps = DESK) -> PairOutcome:
    """Search for an instance whose projection onto its first two
    variables minimises exactly on {(a,b),(b,a)}.

    The strict block ranges over operations moving the pair; on failure
    the Farkas side is symmetrised into a certificate distribution whose
    improvement inequality is re-verified column by column.
    """
    size = language.domain.size
    if a == b or not (0 <= a < size and 0 <= b < size):
        raise VcspError("need two distinct domain elements")
    ops = _binary_ops(language.domain, caps)
    moving = [g for g in ops if {g.apply1((a, b)), g.apply1((b, a))} != {a, b}]
    columns = list(_gadget_columns(language))

    def coeff_row(g: Operation, i: int):
        row = []
        for f, x1, x2 in columns:
            out = apply_componentwise(g, (x1, x2))[0]
            proj = x1 if i == 0 else x2
            row.append(f.evaluate(out) - f.evaluate(proj))
        return tuple(row)

    strict = [coeff_row(g, i) for g in moving for i in (0, 1)]
    weak = [coeff_row(g, i) for g in ops for i in (0, 1)]
    result = motzkin_alternative(AlternativeSystem.make(strict, weak))

    if result.strict_solution is not None:
        instance = _build_gadget_instance(language, columns, result.strict_solution, a, b)
        kept = instance.variables[:2]
        h = min_projection(instance, kept, name=f"h_{a}_{b}", caps=caps).function
        _verify_gadget_h(h, a, b)
        return PairOutcome(pair=(a, b), gadget=instance, h=h)

    z1, z2 = result.certificate
    zeta = {}
    for idx, g in enumerate(moving):
        for i in (0, 1):
            zeta[(g.table, i)] = zeta.get((g.table, i), Fraction(0)) + z1[2 * idx + i]
    for idx, g in enumerate(ops):
        for i in (0, 1):
            zeta[(g.table, i)] = zeta.get((g.table, i), Fraction(0)) + z2[2 * idx + i]
    # symmetrise: pair (g, i) with (swap(g), 1-i) so both projections carry
    # equal mass, turning the combination into an improvement inequality
    sym = {}
    for g in ops:
        gs = _swap_op(g)
        for i in (0, 1):
            w = (zeta.get((g.table, i), Fraction(0)) + zeta.get((gs.table, 1 - i), Fraction(0))) / 2
            if w:
                sym[(g.table, i)] = w
    weights: dict[Operation, Fraction] = {}
    for g in ops:
        w = sym.get((g.table, 0), Fraction(0)) + sym.get((g.table, 1), Fraction(0))
        if w:
            weights[g] = w
    total = sum(weights.values(), Fraction(0))
    omega = FractionalOperation.make([(g, w / total) for g, w in weights.items()])
    _verify_pair_certificate(language, omega, a, b)
    return PairOutcome(pair=(a, b), certificate=omega)


def _build_gadget_instance(language, columns, y, a, b) -> VcspInstance:
    size = language.domain.size
    ordering = [(a, b), (b, a)]
    for pair in itertools.product(range(size), repeat=2):
        if pair not in ordering:
            ordering.append(pair)
    var_of = {pair: f"v{pair[0]}_{pair[1]}" for pair in ordering}
    variables = tuple(var_of[pair] for pair in ordering)
    constraints = []
    for (f, x1, x2), w in zip(columns, y):
        if w > 0:
            scope = tuple(var_of[(c, d)] for c, d in zip(x1, x2))
            constraints.append(Constraint(w, f, scope))
    return VcspInstance(language.domain, variables, tuple(constraints))


def _verify_gadget_h(h: CostFunction, a: int, b: int):
    size = h.domain.size
    best = min(h.table)
    argmin = {t for t in all_tuples(size, 2) if h.evaluate(t) == best}
    if argmin != {(a, b), (b, a)}:
        raise VerificationError(f"gadget projection minimises on {sorted(argmin)}, "
                                f"not {{({a},{b}),({b},{a})}}")


def _verify_pair_certificate(language: ValuedLanguage, omega: FractionalOperation,
                             a: int, b: int):
    check = check_fractional_polymorphism(language, omega)
    if not check.holds:
        raise VerificationError("pair certificate fails the polymorphism inequality")
    if not any({g.apply1((a, b)), g.apply1((b, a))} != {a, b} for g in omega.support()):
        raise VerificationError("pair certificate never moves the pair")


def exist_fpol_combination(language: ValuedLanguage,
                           duals: Mapping[tuple[int, int], FractionalOperation]
                           ) -> FractionalOperation:
    """Average the per-pair certificates into one binary fractional
    polymorphism that moves every pair."""
    size = language.domain.size
    pairs = [(a, b) for a in range(size) for b in range(size) if a != b]
    for pair in pairs:
        if pair not in duals:
            raise VcspError(f"missing certificate for pair {pair}")
    scale = Fraction(1, size * size - size)
    weights: dict[Operation, Fraction] = {}
    for pair in pairs:
        for g, w in duals[pair].items():
            weights[g] = weights.get(g, Fraction(0)) + scale * w
    omega = FractionalOperation.make(weights)
    check = check_fractional_polymorphism(language, omega)
    if not check.holds:
        raise VerificationError("combined distribution fails the polymorphism inequality")
    for a, b in pairs:
        if not any({g.apply1((a, b)), g.apply1((b, a))} != {a, b} for g in omega.support()):
            raise VerificationError(f"combined distribution never moves pair ({a},{b})")
    return omega


def mc_to_mcprime(h: CostFunction) -> UnaryFunctionPair:
    """From a binary h minimising exactly on {(a,b),(b,a)}, produce a
    unary u minimising on {a,b} and a binary h' with
    h'(a,b) = h'(b,a) < h'(a,a) = h'(b,b)."""
    if h.arity != 2:
        raise VcspError("expected a binary function")
    size = h.domain.size
    best = min(h.table)
    argmin = sorted(t for t in all_tuples(size, 2) if h.evaluate(t) == best)
    if len(argmin) != 2 or argmin[0] != tuple(reversed(argmin[1])) or argmin[0][0] == argmin[0][1]:
        raise VcspError(f"argmin must be an off-diagonal pair and its swap, got {argmin}")
    a, b = argmin[0]
    if h.evaluate((a, a)) == h.evaluate((b, b)):
        u = CostFunction(f"{h.name}.u", 1, h.domain,
                         tuple(min(h.evaluate((x, y)) for y in range(size)) for x in range(size)))
        return UnaryFunctionPair(u, h)
    if h.evaluate((a, a)) > h.evaluate((b, b)):
        a, b = b, a
    # normalise: zero on the minimising pair, >= 1 elsewhere
    off = min(h.evaluate(t) - best for t in all_tuples(size, 2) if set(t) != {a, b})
    scale = Fraction(1) / off

    def h0(x, y):
        return (h.evaluate((x, y)) - best) * scale

    def u0(x):
        return min(h0(x, y) for y in range(size))

    C = max(h0(a, a) - h0(x, x) for x in range(size))
    uprime = [min(C * u0(y) + h0(y, y) + h0(x, y) for y in range(size)) for x in range(size)]
    delta = h0(b, b) - h0(a, a)
    denom = uprime[a] - uprime[b]
    if delta <= 0 or denom <= 0:
        raise VerificationError("transform internals violate the construction's invariants")
    table = []
    for x, y in all_tuples(size, 2):
        table.append(h0(x, y) + (delta / 2) * (uprime[x] + uprime[y]) / denom)
    hprime = CostFunction(f"{h.name}.prime", 2, h.domain, tuple(table))
    u = CostFunction(f"{h.name}.u", 1, h.domain, tuple(u0(x) for x in range(size)))
    _verify_mcprime(u, hprime, a, b)
    return UnaryFunctionPair(u, hprime)


def _verify_mcprime(u: CostFunction, hp: CostFunction, a: int, b: int):
    size = u.domain.size
    umin = min(u.table)
    if {x for x in range(size) if u.evaluate((x,)) == umin} != {a, b}:
        raise VerificationError("unary part does not minimise exactly on the pair")
    if not (hp.evaluate((a, b)) == hp.evaluate((b, a)) < hp.evaluate((a, a)) == hp.evaluate((b, b))):
        raise VerificationError("binary part violates the strict diagonal condition")


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str  # "tractable" | "np-hard"
    core_subset: tuple[int, ...]
    core_language: ValuedLanguage
    tractable_witness: Optional[FractionalOperation] = None
    hardness: Optional[PairOutcome] = None


def classify(language: ValuedLanguage, *, caps: Caps = DESK) -> ClassificationResult:
    """Full pipeline: core extraction, tractability LP, then per-pair
    gadget search over the core's pinned closure."""
    caps.check_domain(language.domain.size)
    core = find_core(language, caps=caps)
    core_lang = core.core_language
    witness = tractability_lp(core_lang, caps=caps, check_core=False)
    if witness is not None:
        return ClassificationResult(verdict="tractable",
                                    core_subset=core.core_subset,
                                    core_language=core_lang,
                                    tractable_witness=witness)
    closure = gamma_c(core_lang, caps=caps)
    size = core_lang.domain.size
    try:
        for a in range(size):
            for b in range(size):
                if a == b:
                    continue
                outcome = pair_hardness_gadget(closure, a, b, caps=caps)
                if outcome.gadget is not None:
                    return ClassificationResult(verdict="np-hard",
                                                core_subset=core.core_subset,
                                                core_language=core_lang,
                                                hardness=outcome)
    except CapExceeded as exc:
        raise InconclusiveUnderCap(
            f"tractability LP failed and the gadget search hit a cap: {exc}") from exc
    raise InternalInconsistency(
        "no tractable witness and no hardness gadget; this contradicts the dichotomy")
