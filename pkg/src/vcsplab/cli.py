"""Command-line surface.

Exit codes are a stable contract: 0 success/tractable, 2 NP-hard,
3 inconclusive under caps, 64 parse error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import click

from .blpsolver import brute_force_solve, extract_assignment, solve_blp
from .caps import Caps, caps_from_env, override
from .classifier import classify, pair_hardness_gadget
from .coremod import find_core
from .errors import CapExceeded, InconclusiveUnderCap, VcspError
from .foundation import ValuedLanguage
from .jsonio import (
    decode_fractional_operation,
    decode_instance,
    decode_language,
    dumps,
    encode_blp_solution,
    encode_classification,
    encode_core_report,
    encode_fractional_operation,
    encode_pair_outcome,
    encode_rho_report,
)
from .langops import check_fractional_polymorphism
from .markovlift import (
    lift_arity,
    recurrent_states,
    stationary_rho,
    strongly_connected_components,
)
from .rationals import rat_str

EXIT_OK = 0
EXIT_NPHARD = 2
EXIT_INCONCLUSIVE = 3
EXIT_PARSE = 64


@dataclass
class CliConfig:
    caps: Caps
    output: str
    decimal: bool


def _load(path, decoder):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ParseFailure(str(exc))
    try:
        return decoder(payload)
    except VcspError as exc:
        raise _ParseFailure(str(exc))


class _ParseFailure(Exception):
    pass


def _emit(config: CliConfig, payload: dict):
    if config.decimal and "value" in payload:
        payload = dict(payload)
        payload["value_decimal_non_authoritative"] = decimal_str(payload["value"])
    if config.output == "pretty":
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        sys.stdout.write(dumps(payload))


def decimal_str(text: str, digits: int = 10) -> str:
    """Approximate decimal rendering via integer arithmetic (round toward 0)."""
    if "/" in text:
        p, q = (int(v) for v in text.split("/"))
    else:
        p, q = int(text), 1
    sign = "-" if p < 0 else ""
    p = abs(p)
    whole, rem = divmod(p, q)
    frac = (rem * 10 ** digits) // q
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".") or "0"


_caps_options = [
    click.option("--caps.domain", "caps_domain", type=int, default=None,
                 help="Override the domain-size cap."),
    click.option("--caps.arity", "caps_arity", type=int, default=None,
                 help="Override the arity cap."),
    click.option("--caps.closure", "caps_closure", type=int, default=None,
                 help="Override the closure-graph vertex cap."),
    click.option("--caps.states", "caps_states", type=int, default=None,
                 help="Override the brute-force state cap."),
]


def _with_caps(fn):
    for opt in reversed(_caps_options):
        fn = opt(fn)
    return fn


@click.group()
@click.option("--output", type=click.Choice(["json", "pretty"]), default="json")
@click.option("--decimal", is_flag=True,
              help="Add an approximate decimal rendering (non-authoritative).")
@click.pass_context
def main(ctx, output, decimal):
    """Exact-rational toolkit for finite-valued constraint languages."""
    ctx.obj = CliConfig(caps=caps_from_env(), output=output, decimal=decimal)


def _config(ctx, caps_domain, caps_arity, caps_closure, caps_states) -> CliConfig:
    config: CliConfig = ctx.obj
    config.caps = override(config.caps, domain_size=caps_domain, arity=caps_arity,
                           closure_vertices=caps_closure, bruteforce_states=caps_states)
    return config


def _run(ctx, body):
    try:
        return body()
    except _ParseFailure as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_PARSE)
    except (CapExceeded, InconclusiveUnderCap) as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        ctx.exit(EXIT_INCONCLUSIVE)
    except VcspError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)


@main.command("classify")
@click.argument("language_file", type=click.Path())
@_with_caps
@click.pass_context
def cmd_classify(ctx, language_file, caps_domain, caps_arity, caps_closure, caps_states):
    """Decide tractable vs NP-hard with a verified witness."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        result = classify(language, caps=config.caps)
        _emit(config, encode_classification(result))
        return EXIT_OK if result.verdict == "tractable" else EXIT_NPHARD

    ctx.exit(_run(ctx, body))


@main.command("solve")
@click.argument("instance_file", type=click.Path())
@click.option("--method", type=click.Choice(["blp", "exact", "auto"]), default="auto")
@_with_caps
@click.pass_context
def cmd_solve(ctx, instance_file, method, caps_domain, caps_arity, caps_closure, caps_states):
    """Solve an instance: relaxation, exhaustive search, or auto."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        instance = _load(instance_file, decode_instance)
        if method == "blp":
            solution = solve_blp(instance, caps=config.caps)
            _emit(config, encode_blp_solution(solution))
            return EXIT_OK
        if method == "exact":
            assignment, value = brute_force_solve(instance, caps=config.caps)
            _emit(config, {"value": rat_str(value), "assignment": assignment,
                           "method": "exact"})
            return EXIT_OK
        functions = {}
        for c in instance.constraints:
            functions.setdefault(c.function.name, c.function)
        language = ValuedLanguage(instance.domain,
                                  tuple(functions[name] for name in sorted(functions)))
        result = classify(language, caps=config.caps)
        if result.verdict == "tractable" and result.core_subset == tuple(
                range(instance.domain.size)):
            assignment, value = extract_assignment(instance, caps=config.caps)
            _emit(config, {"value": rat_str(value), "assignment": assignment,
                           "method": "blp", "integral": True})
        else:
            assignment, value = brute_force_solve(instance, caps=config.caps)
            _emit(config, {"value": rat_str(value), "assignment": assignment,
                           "method": "exact"})
        return EXIT_OK

    ctx.exit(_run(ctx, body))


@main.command("core")
@click.argument("language_file", type=click.Path())
@_with_caps
@click.pass_context
def cmd_core(ctx, language_file, caps_domain, caps_arity, caps_closure, caps_states):
    """Detect core-ness and extract a core."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        report = find_core(language, caps=config.caps)
        _emit(config, encode_core_report(report))
        return EXIT_OK

    ctx.exit(_run(ctx, body))


@main.command("check-fpol")
@click.argument("language_file", type=click.Path())
@click.argument("fpol_file", type=click.Path())
@_with_caps
@click.pass_context
def cmd_check_fpol(ctx, language_file, fpol_file,
                   caps_domain, caps_arity, caps_closure, caps_states):
    """Verify the improvement inequality of a fractional operation."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        omega = _load(fpol_file, decode_fractional_operation)
        check = check_fractional_polymorphism(language, omega)
        payload = {"holds": check.holds}
        if not check.holds:
            payload["violation"] = {
                "function": check.function.name,
                "tuples": [list(t) for t in check.tuples],
                "lhs": rat_str(check.lhs),
                "rhs": rat_str(check.rhs),
            }
        _emit(config, payload)
        return EXIT_OK if check.holds else 1

    ctx.exit(_run(ctx, body))


@main.command("gadget")
@click.argument("language_file", type=click.Path())
@click.option("--pair", required=True, help="Domain pair, e.g. 0,1.")
@_with_caps
@click.pass_context
def cmd_gadget(ctx, language_file, pair, caps_domain, caps_arity, caps_closure, caps_states):
    """Hardness gadget or dual certificate for one domain pair."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        try:
            a, b = (int(v) for v in pair.split(","))
        except ValueError:
            raise _ParseFailure(f"bad --pair {pair!r}; expected a,b")
        outcome = pair_hardness_gadget(language, a, b, caps=config.caps)
        _emit(config, encode_pair_outcome(outcome))
        return EXIT_OK

    ctx.exit(_run(ctx, body))


@main.command("rho")
@click.argument("language_file", type=click.Path())
@click.argument("fpol_file", type=click.Path())
@_with_caps
@click.pass_context
def cmd_rho(ctx, language_file, fpol_file,
            caps_domain, caps_arity, caps_closure, caps_states):
    """Stationary 2->2 polymorphism from a binary seed."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        omega = _load(fpol_file, decode_fractional_operation)
        rho, graph = stationary_rho(language, omega, caps=config.caps)
        sccs = strongly_connected_components(
            len(graph.vertices), lambda v: [j for _, j in graph.edges[v]])
        _emit(config, encode_rho_report(rho, len(graph.vertices), len(sccs),
                                        len(recurrent_states(graph))))
        return EXIT_OK

    ctx.exit(_run(ctx, body))


@main.command("lift-fpol")
@click.argument("language_file", type=click.Path())
@click.argument("fpol_file", type=click.Path())
@click.option("--arity", type=int, required=True)
@_with_caps
@click.pass_context
def cmd_lift(ctx, language_file, fpol_file, arity,
             caps_domain, caps_arity, caps_closure, caps_states):
    """Lift a symmetric polymorphism to a higher arity."""
    config = _config(ctx, caps_domain, caps_arity, caps_closure, caps_states)

    def body():
        language = _load(language_file, decode_language)
        omega = _load(fpol_file, decode_fractional_operation)
        lifted = lift_arity(language, omega, arity, caps=config.caps)
        _emit(config, encode_fractional_operation(lifted))
        return EXIT_OK

    ctx.exit(_run(ctx, body))


if __name__ == "__main__":
    main()
