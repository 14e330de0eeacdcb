"""JSON wire formats for every public structure.

All numerics are exact "p/q" strings (integers as "n").  Serialization is
deterministic: keys are sorted, supports are in canonical order, and equal
values produce byte-identical output.
"""

from __future__ import annotations

import json
from typing import Any

from .blpsolver import BlpSolution
from .classifier import ClassificationResult, PairOutcome
from .coremod import CoreReport
from .errors import VcspError
from .foundation import (
    Constraint,
    CostFunction,
    Domain,
    FractionalOperation,
    Operation,
    ValuedLanguage,
    VcspInstance,
)
from .rationals import parse_rat, rat_str


def dumps(payload: Any) -> str:
    """Deterministic rendering of an already-encoded payload."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _fail(msg: str) -> VcspError:
    return VcspError(f"malformed input: {msg}")


def _expect(obj, key, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise _fail(f"missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise _fail(f"field {key!r} has the wrong type")
    return value


# --- domain ---------------------------------------------------------------

def encode_domain(domain: Domain) -> dict:
    out: dict[str, Any] = {"size": domain.size}
    if domain.labels is not None:
        out["labels"] = list(domain.labels)
    return out


def decode_domain(obj) -> Domain:
    size = _expect(obj, "size", int)
    labels = obj.get("labels")
    return Domain(size, None if labels is None else tuple(labels))


# --- cost functions, languages, instances ---------------------------------

def encode_function(f: CostFunction) -> dict:
    return {"name": f.name, "arity": f.arity, "table": [rat_str(v) for v in f.table]}


def decode_function(obj, domain: Domain) -> CostFunction:
    name = _expect(obj, "name", str)
    arity = _expect(obj, "arity", int)
    table = _expect(obj, "table", list)
    try:
        values = tuple(parse_rat(v) for v in table)
    except (TypeError, ValueError) as exc:
        raise _fail(f"function {name!r}: {exc}")
    return CostFunction(name, arity, domain, values)


def encode_language(language: ValuedLanguage) -> dict:
    return {"domain": encode_domain(language.domain),
            "functions": [encode_function(f) for f in language.functions]}


def decode_language(obj) -> ValuedLanguage:
    domain = decode_domain(_expect(obj, "domain", dict))
    functions = tuple(decode_function(f, domain) for f in _expect(obj, "functions", list))
    return ValuedLanguage(domain, functions)


def encode_instance(instance: VcspInstance) -> dict:
    functions = {}
    for c in instance.constraints:
        functions.setdefault(c.function.name, c.function)
    return {
        "domain": encode_domain(instance.domain),
        "functions": [encode_function(functions[name]) for name in sorted(functions)],
        "variables": list(instance.variables),
        "constraints": [
            {"weight": rat_str(c.weight), "function": c.function.name, "scope": list(c.scope)}
            for c in instance.constraints
        ],
    }


def decode_instance(obj) -> VcspInstance:
    domain = decode_domain(_expect(obj, "domain", dict))
    functions = {f.name: f for f in
                 (decode_function(o, domain) for o in _expect(obj, "functions", list))}
    variables = tuple(_expect(obj, "variables", list))
    constraints = []
    for c in _expect(obj, "constraints", list):
        fname = _expect(c, "function", str)
        if fname not in functions:
            raise _fail(f"constraint references unknown function {fname!r}")
        try:
            weight = parse_rat(_expect(c, "weight", None))
        except (TypeError, ValueError) as exc:
            raise _fail(str(exc))
        constraints.append(Constraint(weight, functions[fname], tuple(_expect(c, "scope", list))))
    return VcspInstance(domain, variables, tuple(constraints))


# --- operations and fractional operations ---------------------------------

def encode_operation(g: Operation) -> dict:
    return {"in_arity": g.in_arity, "out_arity": g.out_arity,
            "table": [list(out) for out in g.table]}


def decode_operation(obj, domain: Domain) -> Operation:
    in_arity = _expect(obj, "in_arity", int)
    out_arity = _expect(obj, "out_arity", int)
    table = tuple(tuple(out) for out in _expect(obj, "table", list))
    return Operation(in_arity, out_arity, domain, table)


def encode_fractional_operation(omega: FractionalOperation) -> dict:
    return {"domain": encode_domain(omega.domain),
            "in_arity": omega.in_arity, "out_arity": omega.out_arity,
            "terms": [{"op": encode_operation(g), "weight": rat_str(w)}
                      for g, w in omega.items()]}


def decode_fractional_operation(obj) -> FractionalOperation:
    domain = decode_domain(_expect(obj, "domain", dict))
    terms = []
    for t in _expect(obj, "terms", list):
        g = decode_operation(_expect(t, "op", dict), domain)
        try:
            w = parse_rat(_expect(t, "weight", None))
        except (TypeError, ValueError) as exc:
            raise _fail(str(exc))
        terms.append((g, w))
    return FractionalOperation.make(terms)


# --- reports ---------------------------------------------------------------

def encode_core_report(report: CoreReport) -> dict:
    out: dict[str, Any] = {"is_core": report.is_core}
    if report.witness is not None:
        out["witness"] = encode_fractional_operation(report.witness)
    if report.core_subset is not None:
        out["core_subset"] = list(report.core_subset)
    if report.core_language is not None:
        out["core_language"] = encode_language(report.core_language)
    return out


def encode_pair_outcome(outcome: PairOutcome) -> dict:
    out: dict[str, Any] = {"pair": list(outcome.pair)}
    if outcome.gadget is not None:
        out["gadget"] = encode_instance(outcome.gadget)
    if outcome.h is not None:
        out["h"] = encode_function(outcome.h)
    if outcome.certificate is not None:
        out["certificate"] = encode_fractional_operation(outcome.certificate)
    return out


def encode_classification(result: ClassificationResult) -> dict:
    out: dict[str, Any] = {
        "verdict": result.verdict,
        "core_subset": list(result.core_subset),
        "core_language": encode_language(result.core_language),
    }
    if result.tractable_witness is not None:
        out["tractable_witness"] = encode_fractional_operation(result.tractable_witness)
    if result.hardness is not None:
        out["hardness"] = encode_pair_outcome(result.hardness)
    return out


def encode_blp_solution(solution: BlpSolution) -> dict:
    mu: dict[str, dict[str, str]] = {}
    for (x, a), w in sorted(solution.mu.items()):
        mu.setdefault(x, {})[str(a)] = rat_str(w)
    lam = [
        {"constraint": i, "assignment": list(sigma), "weight": rat_str(w)}
        for (i, sigma), w in sorted(solution.lam.items())
        if w != 0
    ]
    return {"value": rat_str(solution.value), "mu": mu, "lambda": lam,
            "integral": solution.integral}


def encode_rho_report(rho: FractionalOperation, vertices: int, sccs: int,
                      recurrent: int) -> dict:
    return {"rho": encode_fractional_operation(rho),
            "graph": {"vertices": vertices, "sccs": sccs, "recurrent": recurrent}}
