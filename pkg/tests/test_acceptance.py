"""Acceptance suite: one test per criterion, each emitting a PASS line.

Every check is exact (tolerance 0); oracles are either brute force or an
independent reimplementation.
"""

import itertools
import random
import sys
import time
from fractions import Fraction

from conftest import boolean_basics, inflate_language, random_instance, random_language
from vcsplab.blpsolver import brute_force_solve, solve_blp
from vcsplab.classifier import classify, mc_to_mcprime, tractability_lp
from vcsplab.coremod import find_core, is_core
from vcsplab.exactlp import AlternativeSystem, motzkin_alternative
from vcsplab.foundation import (
    Constraint,
    CostFunction,
    Domain,
    FractionalOperation,
    Operation,
    ValuedLanguage,
    VcspInstance,
    all_tuples,
    op_predicates,
)
from vcsplab.jsonio import (
    dumps,
    encode_blp_solution,
    encode_classification,
    encode_fractional_operation,
)
from vcsplab.langops import check_fractional_polymorphism, restrict_language
from vcsplab.coremod import substitute_language
from vcsplab.markovlift import (
    exchange_property,
    lift_arity,
    recurrent_states,
    stationary_rho,
    symmetrize,
)


def _report(criterion: int, label: str, started: float):
    elapsed = time.monotonic() - started
    print(f"[criterion {criterion}] PASS: {label} ({elapsed:.1f}s)",
          file=sys.__stdout__, flush=True)


def test_criterion_1_boolean_dichotomy():
    started = time.monotonic()
    D, xor, g2, u0, u1 = boolean_basics()

    hard = classify(ValuedLanguage(D, (xor, u0, u1)))
    assert hard.verdict == "np-hard"
    h = hard.hardness.h
    a, b = hard.hardness.pair
    best = min(h.table)
    assert {t for t in all_tuples(2, 2) if h.evaluate(t) == best} == {(a, b), (b, a)}
    # brute-force re-verification of the gadget projection
    from vcsplab.foundation import instance_value
    gadget = hard.hardness.gadget
    rest = gadget.variables[2:]
    for t in all_tuples(2, 2):
        best_ext = None
        for ext in all_tuples(2, len(rest)):
            assignment = dict(zip(gadget.variables[:2], t))
            assignment.update(zip(rest, ext))
            v = instance_value(gadget, assignment)
            best_ext = v if best_ext is None else min(best_ext, v)
        assert best_ext == h.evaluate(t)

    tract = classify(ValuedLanguage(D, (g2, u0, u1)))
    assert tract.verdict == "tractable"
    witness = tract.tractable_witness
    for g in witness.support():
        preds = op_predicates(g)
        assert preds.idempotent and preds.symmetric
    assert check_fractional_polymorphism(ValuedLanguage(D, (g2, u0, u1)), witness).holds
    assert time.monotonic() - started < 10  # < 5 s each
    _report(1, "Boolean dichotomy with verified witnesses", started)


def _chain_distance_language(name_prefix: str, size: int) -> ValuedLanguage:
    """|x - y| plus monotone unaries: submodular on the natural chain."""
    D = Domain(size)
    dist = CostFunction.from_callable(f"{name_prefix}d", 2, D,
                                      lambda x, y: abs(x - y))
    up = CostFunction.from_callable(f"{name_prefix}u", 1, D, lambda x: x)
    down = CostFunction.from_callable(f"{name_prefix}v", 1, D, lambda x: size - 1 - x)
    return ValuedLanguage(D, (dist, up, down))


def test_criterion_2_blp_soundness():
    started = time.monotonic()
    rng = random.Random(20260824)
    D, xor, g2, u0, u1 = boolean_basics()
    languages = [ValuedLanguage(D, (g2, u0, u1)),
                 _chain_distance_language("c", 3)]
    for i in range(9):
        languages.append(random_language(rng, Domain(2), 2, 3, max_num=4, max_den=2))
    for i in range(9):
        languages.append(random_language(rng, Domain(3), 2, 2, max_num=4, max_den=2))

    total = 0
    tight_languages = 0
    for lang in languages:
        witness = tractability_lp(lang, check_core=False)
        if witness is not None:
            tight_languages += 1
        for _ in range(10):
            inst = random_instance(rng, lang, rng.randint(2, 6), rng.randint(1, 8))
            blp = solve_blp(inst)
            _, opt = brute_force_solve(inst)
            assert blp.value <= opt
            if witness is not None:
                assert blp.value == opt
            total += 1
    assert total >= 200
    assert tight_languages >= 2

    # strict integrality gap on the frustrated xor triangle
    triangle = VcspInstance(D, ("a", "b", "c"), tuple(
        Constraint(Fraction(1), xor, s) for s in (("a", "b"), ("b", "c"), ("a", "c"))))
    assert solve_blp(triangle).value == 0 < brute_force_solve(triangle)[1]
    assert time.monotonic() - started < 120
    _report(2, f"BLP sound on {total} instances, tight on "
               f"{tight_languages} tractable languages", started)


def test_criterion_3_core_machinery():
    started = time.monotonic()
    rng = random.Random(777)
    for trial in range(50):
        base = random_language(rng, Domain(2), 2, 2, max_num=5, max_den=2)
        lang = inflate_language(base)  # |D| = 3, never a core
        report = find_core(lang)
        assert not report.is_core
        assert is_core(report.core_language).is_core
        restricted = restrict_language(lang, report.core_subset)
        for _ in range(20):
            inst = random_instance(rng, lang, rng.randint(2, 4), rng.randint(1, 5))
            sub = substitute_language(inst, restricted)
            assert brute_force_solve(inst)[1] == brute_force_solve(sub)[1]
    assert time.monotonic() - started < 120
    _report(3, "core extraction + optimum preservation on 50 languages "
               "x 20 instances", started)


def test_criterion_4_motzkin_alternative():
    started = time.monotonic()
    rng = random.Random(424242)
    strict_count = cert_count = 0
    for _ in range(500):
        n = rng.randint(1, 4)
        A = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
             for _ in range(rng.randint(1, 4))]
        B = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
             for _ in range(rng.randint(0, 4))]
        system = AlternativeSystem.make(A, B)
        result = motzkin_alternative(system)
        # exactly one branch, re-verified by independent substitution
        assert (result.strict_solution is None) != (result.certificate is None)
        if result.strict_solution is not None:
            strict_count += 1
            y = result.strict_solution
            assert all(v >= 0 for v in y)
            for row in A:
                assert sum(c * v for c, v in zip(row, y)) > 0
            for row in B:
                assert sum(c * v for c, v in zip(row, y)) >= 0
        else:
            cert_count += 1
            z1, z2 = result.certificate
            assert any(v > 0 for v in z1)
            assert all(v >= 0 for v in z1) and all(v >= 0 for v in z2)
            for j in range(n):
                combo = sum(z1[i] * A[i][j] for i in range(len(A)))
                combo += sum(z2[i] * B[i][j] for i in range(len(B)))
                assert combo <= 0
    assert strict_count and cert_count
    assert time.monotonic() - started < 30
    _report(4, f"Motzkin alternative on 500 systems "
               f"({strict_count} strict / {cert_count} certificates)", started)


def test_criterion_5_mc_to_mcprime():
    started = time.monotonic()
    rng = random.Random(1213)
    for _ in range(100):
        size = rng.choice((2, 3))
        D = Domain(size)
        a = rng.randrange(size)
        b = rng.choice([x for x in range(size) if x != a])
        table = []
        for t in all_tuples(size, 2):
            if set(t) == {a, b}:
                table.append(Fraction(0))
            else:
                table.append(Fraction(rng.randint(1, 6), rng.randint(1, 3)))
        h = CostFunction("h", 2, D, tuple(table))
        pair = mc_to_mcprime(h)
        u, hp = pair.u, pair.h
        umin = min(u.table)
        assert {x for x in range(size) if u.evaluate((x,)) == umin} == {a, b}
        assert hp.evaluate((a, b)) == hp.evaluate((b, a))
        assert hp.evaluate((a, a)) == hp.evaluate((b, b))
        assert hp.evaluate((a, b)) < hp.evaluate((a, a))
    assert time.monotonic() - started < 10
    _report(5, "pair-form transform on 100 random binary functions", started)


def test_criterion_6_markov_pipeline():
    started = time.monotonic()
    D, xor, g2, u0, u1 = boolean_basics()
    lang = ValuedLanguage(D, (g2,))
    mn = Operation.from_callable(2, 1, D, min)
    mx = Operation.from_callable(2, 1, D, max)
    omega = FractionalOperation.make({mn: Fraction(1, 2), mx: Fraction(1, 2)})

    rho, graph = stationary_rho(lang, omega)  # verified: Eq. (2) + support
    recurrent = {graph.vertices[v].table for v in recurrent_states(graph)}
    assert all(g.table in recurrent for g in rho.support())
    assert exchange_property(lang, rho) is None

    sym = symmetrize(lang, rho)  # verified symmetric binary polymorphism
    assert sym == omega
    lifted = lift_arity(lang, sym, 3)
    assert lifted.in_arity == 3
    for g in lifted.support():
        assert op_predicates(g).symmetric
    assert check_fractional_polymorphism(lang, lifted).holds
    assert time.monotonic() - started < 60
    _report(6, "stationary 2->2 polymorphism, symmetrization, ternary lift",
            started)


# --- independent oracle for criterion 7 (no shared enumeration code) -------

def _oracle_holds(language, terms) -> bool:
    """Brute-force improvement check working on raw tables and indices."""
    size = language.domain.size
    for f in language.functions:
        n = f.arity
        num_tuples = size ** n
        for idx1 in range(num_tuples):
            for idx2 in range(num_tuples):
                t1 = []
                t2 = []
                r1, r2 = idx1, idx2
                for _ in range(n):
                    t1.append(r1 % size)
                    t2.append(r2 % size)
                    r1 //= size
                    r2 //= size
                t1.reverse()
                t2.reverse()
                rhs = (f.table[idx1] + f.table[idx2]) / 2
                lhs = Fraction(0)
                for table, weight in terms:
                    out_idx = 0
                    for x, y in zip(t1, t2):
                        out_idx = out_idx * size + table[x * size + y]
                    lhs += weight * f.table[out_idx]
                if lhs > rhs:
                    return False
    return True


def _all_weightings(max_den=4):
    singles = [(Fraction(1),)]
    pairs = sorted({(Fraction(p, q), 1 - Fraction(p, q))
                    for q in range(2, max_den + 1) for p in range(1, q)})
    triples = sorted({tuple(sorted((Fraction(a, q), Fraction(b, q),
                                    Fraction(q - a - b, q))))
                      for q in (3, 4) for a in range(1, q) for b in range(1, q - a)})
    return singles, pairs, triples


def test_criterion_7_checker_vs_oracle():
    started = time.monotonic()
    rng = random.Random(31337)
    D = Domain(2)
    ops = [Operation(2, 1, D, tuple((v,) for v in values))
           for values in all_tuples(2, 4)]
    singles, pairs, triples = _all_weightings()
    supports = ([(g,) for g in ops]
                + list(itertools.combinations(ops, 2))
                + list(itertools.combinations(ops, 3)))

    checked = 0
    agreements = {True: 0, False: 0}
    for li in range(20):
        lang = random_language(rng, D, 2, 2, max_num=3, max_den=2)
        for support in supports:
            weightings = {1: singles, 2: pairs, 3: triples}[len(support)]
            for weights in weightings:
                omega = FractionalOperation.make(list(zip(support, weights)))
                got = check_fractional_polymorphism(lang, omega).holds
                want = _oracle_holds(lang, [(tuple(o[0] for o in g.table), w)
                                            for g, w in zip(support, weights)])
                assert got == want
                agreements[got] += 1
                checked += 1
    assert agreements[True] and agreements[False]
    assert time.monotonic() - started < 60
    _report(7, f"checker agrees with the independent oracle on {checked} "
               "fractional operations over 20 languages", started)


def test_criterion_8_determinism():
    started = time.monotonic()
    D, xor, g2, u0, u1 = boolean_basics()
    hard = ValuedLanguage(D, (xor, u0, u1))
    tract = ValuedLanguage(D, (g2, u0, u1))
    for lang in (hard, tract):
        a = dumps(encode_classification(classify(lang)))
        b = dumps(encode_classification(classify(lang)))
        assert a == b

    inst = VcspInstance(D, ("a", "b", "c"), tuple(
        Constraint(Fraction(1), xor, s) for s in (("a", "b"), ("b", "c"), ("a", "c"))))
    assert dumps(encode_blp_solution(solve_blp(inst))) == \
        dumps(encode_blp_solution(solve_blp(inst)))

    mn = Operation.from_callable(2, 1, D, min)
    mx = Operation.from_callable(2, 1, D, max)
    omega = FractionalOperation.make({mn: Fraction(1, 2), mx: Fraction(1, 2)})
    lang = ValuedLanguage(D, (g2,))
    r1, _ = stationary_rho(lang, omega)
    r2, _ = stationary_rho(lang, omega)
    assert dumps(encode_fractional_operation(r1)) == dumps(encode_fractional_operation(r2))
    _report(8, "byte-identical JSON across repeated runs", started)
