import random
from fractions import Fraction

import pytest

from conftest import boolean_basics
from vcsplab.classifier import (
    classify,
    exist_fpol_combination,
    idempotent_symmetric_binary_ops,
    mc_to_mcprime,
    pair_hardness_gadget,
    tractability_lp,
)
from vcsplab.errors import VcspError
from vcsplab.foundation import (
    CostFunction,
    Domain,
    ValuedLanguage,
    all_tuples,
    op_predicates,
)
from vcsplab.langops import check_fractional_polymorphism


def test_idempotent_symmetric_enumeration():
    ops = idempotent_symmetric_binary_ops(Domain(2))
    assert len(ops) == 2  # min and max
    ops3 = idempotent_symmetric_binary_ops(Domain(3))
    assert len(ops3) == 27
    for g in ops3:
        preds = op_predicates(g)
        assert preds.idempotent and preds.symmetric


def test_tractability_lp_positive():
    D, xor, g2, u0, u1 = boolean_basics()
    omega = tractability_lp(ValuedLanguage(D, (g2, u0, u1)))
    assert omega is not None
    assert check_fractional_polymorphism(ValuedLanguage(D, (g2, u0, u1)), omega).holds


def test_tractability_lp_negative():
    D, xor, g2, u0, u1 = boolean_basics()
    assert tractability_lp(ValuedLanguage(D, (xor, u0, u1))) is None


def test_tractability_lp_requires_core():
    D, xor, g2, u0, u1 = boolean_basics()
    with pytest.raises(VcspError):
        tractability_lp(ValuedLanguage(D, (g2,)))  # not a core


def test_classify_tractable():
    D, xor, g2, u0, u1 = boolean_basics()
    result = classify(ValuedLanguage(D, (g2, u0, u1)))
    assert result.verdict == "tractable"
    for g in result.tractable_witness.support():
        preds = op_predicates(g)
        assert preds.idempotent and preds.symmetric


def test_classify_np_hard_with_gadget():
    D, xor, g2, u0, u1 = boolean_basics()
    result = classify(ValuedLanguage(D, (xor, u0, u1)))
    assert result.verdict == "np-hard"
    h = result.hardness.h
    a, b = result.hardness.pair
    best = min(h.table)
    argmin = {t for t in all_tuples(2, 2) if h.evaluate(t) == best}
    assert argmin == {(a, b), (b, a)}
    # the gadget instance really projects to h
    assert result.hardness.gadget is not None


def test_classify_collapses_to_core_first():
    D, xor, g2, u0, u1 = boolean_basics()
    result = classify(ValuedLanguage(D, (g2,)))
    assert result.verdict == "tractable"
    assert len(result.core_subset) == 1


def test_pair_certificate_branch():
    D, xor, g2, u0, u1 = boolean_basics()
    lang = ValuedLanguage(D, (g2, u0, u1))
    duals = {}
    for pair in ((0, 1), (1, 0)):
        outcome = pair_hardness_gadget(lang, *pair)
        assert outcome.gadget is None
        assert outcome.certificate is not None
        duals[pair] = outcome.certificate
    combined = exist_fpol_combination(lang, duals)
    assert check_fractional_polymorphism(lang, combined).holds


def test_pair_gadget_validation():
    D, xor, g2, u0, u1 = boolean_basics()
    with pytest.raises(VcspError):
        pair_hardness_gadget(ValuedLanguage(D, (xor,)), 0, 0)
    with pytest.raises(VcspError):
        pair_hardness_gadget(ValuedLanguage(D, (xor,)), 0, 2)


def _random_mc_function(rng: random.Random, size: int) -> tuple[CostFunction, int, int]:
    D = Domain(size)
    a = rng.randrange(size)
    b = rng.choice([x for x in range(size) if x != a])
    table = []
    for t in all_tuples(size, 2):
        if set(t) == {a, b}:
            table.append(Fraction(0))
        else:
            table.append(Fraction(rng.randint(1, 5), rng.randint(1, 2)))
    return CostFunction("h", 2, D, tuple(table)), a, b


def test_mc_to_mcprime_random():
    rng = random.Random(5150)
    for _ in range(40):
        h, a, b = _random_mc_function(rng, rng.choice((2, 3)))
        pair = mc_to_mcprime(h)
        u, hp = pair.u, pair.h
        umin = min(u.table)
        assert {x for x in range(u.domain.size) if u.evaluate((x,)) == umin} == {a, b}
        assert hp.evaluate((a, b)) == hp.evaluate((b, a))
        assert hp.evaluate((a, a)) == hp.evaluate((b, b))
        assert hp.evaluate((a, b)) < hp.evaluate((a, a))


def test_mc_to_mcprime_rejects_bad_argmin():
    D = Domain(2)
    flat = CostFunction.from_values("h", 2, D, [0, 0, 0, 0])
    with pytest.raises(VcspError):
        mc_to_mcprime(flat)
    diag = CostFunction.from_values("h", 2, D, [0, 1, 1, 1])
    with pytest.raises(VcspError):
        mc_to_mcprime(diag)
