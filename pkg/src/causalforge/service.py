"""Stateless HTTP API over a single loaded model; serves the explorer UI."""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .explanation import ArgumentPolicy, extract_rx, influence_graph
from .export import explanation_to_document
from .model import CausalModel, EvaluationError, Input, Intervention, evaluate
from .verify import verify_properties


class DomainViolation(Exception):
    """A well-formed request that the model's domains reject (HTTP 422)."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class MalformedRequest(Exception):
    """A request body that does not match the expected shape (HTTP 400)."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _coerce_value(raw: Any, where: str) -> str:
    if isinstance(raw, bool):
        return "1" if raw else "0"
    if isinstance(raw, int):
        return str(raw)
    if isinstance(raw, str):
        return raw
    raise DomainViolation("bad-value", f"{where}: value {raw!r} is not a token")


def _parse_input(body: Any) -> Input:
    if not isinstance(body, dict):
        raise MalformedRequest("request body must be a JSON object")
    raw = body.get("input")
    if raw is None:
        raise MalformedRequest("missing 'input' object")
    if not isinstance(raw, dict):
        raise MalformedRequest("'input' must be an object of variable: value")
    return Input({str(k): _coerce_value(v, f"input.{k}") for k, v in raw.items()})


def _parse_interventions(body: Any) -> list[Intervention]:
    raw = body.get("interventions", [])
    if not isinstance(raw, list):
        raise MalformedRequest("'interventions' must be a list")
    parsed = []
    for item in raw:
        if not isinstance(item, dict) or "variable" not in item or "value" not in item:
            raise MalformedRequest("each intervention needs 'variable' and 'value'")
        parsed.append(
            Intervention(str(item["variable"]), _coerce_value(item["value"], "intervention"))
        )
    return parsed


def model_summary(model: CausalModel, model_name: str) -> dict:
    graph = influence_graph(model)
    return {
        "name": model_name,
        "binary": model.is_binary,
        "domains": [
            {
                "name": domain.name,
                "values": list(domain.values),
                "order": [list(pair) for pair in sorted(domain.strict_order)],
            }
            for domain in (model.domains[n] for n in sorted(model.domains))
        ],
        "variables": [
            {"name": var.name, "kind": var.kind, "domain": var.domain.name}
            for var in (model.variables[n] for n in sorted(model.variables))
        ],
        "influences": [list(edge) for edge in sorted(graph.influences)],
    }


def create_app(model: CausalModel, model_name: str, ui_dir: Path | None = None) -> FastAPI:
    """All handlers share the immutable model snapshot; requests carry the
    whole what-if state, so nothing persists between calls."""
    model.require_valid()
    app = FastAPI(title="causal-forge", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    summary = model_summary(model, model_name)

    @app.exception_handler(MalformedRequest)
    async def _malformed(request: Request, err: MalformedRequest):
        return JSONResponse({"code": "malformed-request", "message": err.message}, status_code=400)

    @app.exception_handler(RequestValidationError)
    async def _unreadable(request: Request, err: RequestValidationError):
        return JSONResponse(
            {"code": "malformed-request", "message": "request does not match the expected shape"},
            status_code=400,
        )

    @app.exception_handler(DomainViolation)
    async def _violation(request: Request, err: DomainViolation):
        return JSONResponse({"code": err.code, "message": err.message}, status_code=422)

    @app.exception_handler(EvaluationError)
    async def _evaluation(request: Request, err: EvaluationError):
        return JSONResponse({"code": "domain-violation", "message": str(err)}, status_code=422)

    @app.get("/model")
    async def get_model() -> dict:
        return summary

    @app.post("/evaluate")
    async def post_evaluate(request: Request) -> dict:
        body = await _json_body(request)
        input = _parse_input(body)
        interventions = _parse_interventions(body)
        assignment = evaluate(model, input, interventions)
        return {"values": {k: v for k, v in sorted(assignment.items())}}

    @app.post("/explain")
    async def post_explain(request: Request) -> dict:
        body = await _json_body(request)
        input = _parse_input(body)
        interventions = _parse_interventions(body)
        raw_policy = body.get("policy", "all")
        if not isinstance(raw_policy, str):
            raise MalformedRequest("'policy' must be a string")
        try:
            policy = ArgumentPolicy.parse(raw_policy)
        except ValueError as err:
            raise DomainViolation("bad-policy", str(err)) from None
        try:
            rx = extract_rx(model, input, policy, interventions)
        except ValueError as err:
            raise DomainViolation("domain-violation", str(err)) from None
        report = verify_properties(model, input, rx)
        return explanation_to_document(rx, model_name, report)

    @app.get("/inputs/enumerate")
    async def enumerate_inputs(cap: int = Query(default=1024, ge=0)) -> dict:
        names = sorted(model.exogenous)
        domains = [model.exogenous[name].domain for name in names]
        total = 1
        for domain in domains:
            total *= len(domain.values)
        if total > cap:
            raise DomainViolation(
                "too-many-inputs", f"{total} inputs exceed the cap of {cap}"
            )
        combos = [
            dict(zip(names, combo))
            for combo in itertools.product(*(d.values for d in domains))
        ]
        return {"count": total, "inputs": combos}

    async def _json_body(request: Request) -> Any:
        try:
            return await request.json()
        except Exception:
            raise MalformedRequest("request body is not valid JSON") from None

    if ui_dir is not None and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
