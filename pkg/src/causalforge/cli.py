"""Command-line interface: validate, eval, explain, verify, fuzz, serve."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dsl import ParseError, parse_model
from .explanation import ArgumentPolicy, extract_rx
from .export import (
    document_json,
    explanation_to_document,
    export_dot,
    export_text,
    render_assignment,
)
from .fuzz import GeneratorParams, run_campaign
from .model import EvaluationError, Input, Intervention, ModelError, evaluate
from .verify import verify_properties

USAGE_ERROR = 2


class CliError(Exception):
    pass


def _load_model(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}") from None
    return parse_model(text)


def _parse_pairs(spec: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise CliError(f"expected NAME=VALUE, got {chunk!r}")
        name, value = chunk.split("=", 1)
        values[name.strip()] = value.strip()
    return values


def _parse_interventions(specs: list[str]) -> list[Intervention]:
    interventions = []
    for spec in specs:
        for name, value in _parse_pairs(spec).items():
            interventions.append(Intervention(name, value))
    return interventions


def cmd_validate(args) -> int:
    model = _load_model(args.model)
    print(f"ok: {len(model.variables)} variables, {len(model.equations)} equations")
    return 0


def cmd_eval(args) -> int:
    model = _load_model(args.model)
    input = Input(_parse_pairs(args.input))
    assignment = evaluate(model, input, _parse_interventions(args.do))
    sys.stdout.write(render_assignment(model, assignment))
    return 0


def cmd_explain(args) -> int:
    model = _load_model(args.model)
    input = Input(_parse_pairs(args.input))
    policy = ArgumentPolicy.parse(args.policy)
    interventions = _parse_interventions(args.do)
    rx = extract_rx(model, input, policy, interventions)
    if args.format == "text":
        sys.stdout.write(export_text(rx))
    elif args.format == "dot":
        sys.stdout.write(export_dot(rx))
    else:
        report = verify_properties(model, input, rx)
        document = explanation_to_document(rx, Path(args.model).stem, report)
        sys.stdout.write(document_json(document))
    return 0


def cmd_verify(args) -> int:
    model = _load_model(args.model)
    input = Input(_parse_pairs(args.input))
    interventions = _parse_interventions(args.do)
    rx = extract_rx(model, input, ArgumentPolicy.parse(args.policy), interventions)
    report = verify_properties(model, input, rx)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_fuzz(args) -> int:
    params = GeneratorParams(
        seed=args.seed,
        models=args.models,
        max_vars=args.max_vars,
        max_parents=args.max_parents,
        domain_profile=args.profile,
        equation_profile=args.equations,
        inputs_per_model=args.inputs_per_model,
        exhaustive_cap=args.cap,
    )
    report = run_campaign(params)
    for line in report.lines():
        print(line)
    return 0 if report.total_failures == 0 else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model = _load_model(args.model)
    port = args.port if args.port is not None else int(os.environ.get("CAUSAL_FORGE_PORT", "8000"))
    bind = args.bind if args.bind is not None else os.environ.get("CAUSAL_FORGE_BIND", "127.0.0.1")
    ui_dir = Path(args.ui) if args.ui else None
    app = create_app(model, Path(args.model).stem, ui_dir=ui_dir)
    uvicorn.run(app, host=bind, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-forge",
        description="Evaluate causal models, forge reinforcement explanations, verify their properties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .cm model file")
    p.add_argument("model")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a model under an input and interventions")
    p.add_argument("model")
    p.add_argument("--input", required=True, help="exogenous values, e.g. U1=1,U2=0")
    p.add_argument("--do", action="append", default=[], help="intervention, e.g. V1=1 (repeatable)")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("explain", help="forge the reinforcement explanation for an input")
    p.add_argument("model")
    p.add_argument("--input", required=True)
    p.add_argument("--do", action="append", default=[])
    p.add_argument("--policy", default="all", help="all | involved | focused:<var>")
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("verify", help="check every property of the explanation for an input")
    p.add_argument("model")
    p.add_argument("--input", required=True)
    p.add_argument("--do", action="append", default=[])
    p.add_argument("--policy", default="all")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("fuzz", help="run a random-model verification campaign")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--max-vars", type=int, default=6)
    p.add_argument("--max-parents", type=int, default=3)
    p.add_argument("--profile", default="binary", help="binary | chain(k) | poset(k)")
    p.add_argument("--equations", choices=("expression", "table"), default="expression")
    p.add_argument("--inputs-per-model", type=int, default=32)
    p.add_argument("--cap", type=int, default=1024, help="exhaustive enumeration cap")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("serve", help="serve the HTTP API (and optionally the explorer UI)")
    p.add_argument("model")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--bind", default=None)
    p.add_argument("--ui", default=None, help="directory with the built explorer UI")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, ParseError, ModelError, EvaluationError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
