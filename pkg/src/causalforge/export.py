"""Deterministic export formats: explanation documents (JSON), DOT and plain text."""

from __future__ import annotations

import json

from .explanation import ReinforcementExplanation
from .model import Assignment, CausalModel
from .verify import PropertyReport, accepted_arguments


def explanation_to_document(
    rx: ReinforcementExplanation,
    model_name: str,
    report: PropertyReport | None = None,
) -> dict:
    """The JSON-ready document for an explanation, with lexicographic ordering
    of every array. Binary models additionally mark accepted arguments."""
    accepted = accepted_arguments(rx) if rx.context.binary else None
    arguments = []
    for name in sorted(rx.arguments):
        entry = {
            "name": name,
            "value": rx.context.values[name],
            "kind": rx.context.kinds[name],
        }
        if accepted is not None:
            entry["accepted"] = name in accepted
        arguments.append(entry)
    document = {
        "model": model_name,
        "input": {k: v for k, v in sorted(rx.context.input_values.items())},
        "interventions": [
            {"variable": iv.variable, "value": iv.value}
            for iv in sorted(rx.context.interventions, key=lambda iv: iv.variable)
        ],
        "policy": rx.context.policy,
        "arguments": arguments,
        "attacks": [list(edge) for edge in sorted(rx.attacks)],
        "supports": [list(edge) for edge in sorted(rx.supports)],
        "edge_annotations": [
            {
                "source": edge[0],
                "target": edge[1],
                "role": "attack" if edge in rx.attacks else "support",
                "witness_value": witness.alternative,
                "witness_outcome": witness.outcome,
                "baseline": witness.baseline,
            }
            for edge, witness in sorted(rx.witnesses.items())
            if edge in rx.attacks or edge in rx.supports
        ],
    }
    if report is not None:
        document["property_report"] = report.to_json()
    return {key: document[key] for key in sorted(document)}


def document_json(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def export_dot(rx: ReinforcementExplanation) -> str:
    """Graphviz text with one node per argument (labelled name=value) and a
    style class on every relation edge. Byte-stable across runs."""
    lines = ["digraph explanation {"]
    for name in sorted(rx.arguments):
        lines.append(f'  "{name}" [label="{name}={rx.context.values[name]}"];')
    edges = [(edge, "attack") for edge in rx.attacks] + [
        (edge, "support") for edge in rx.supports
    ]
    for (source, target), role in sorted(edges):
        lines.append(f'  "{source}" -> "{target}" [style={role}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_text(rx: ReinforcementExplanation) -> str:
    """Terminal-friendly listing of arguments and forged relations."""
    values = " ".join(f"{a}={rx.context.values[a]}" for a in sorted(rx.arguments))
    lines = [f"arguments: {values}" if rx.arguments else "arguments: (none)"]
    for source, target in sorted(rx.attacks):
        lines.append(f"attack: {source} -> {target}")
    for source, target in sorted(rx.supports):
        lines.append(f"support: {source} -> {target}")
    if not rx.attacks and not rx.supports:
        lines.append("no relations forged")
    return "\n".join(lines) + "\n"


def render_assignment(model: CausalModel, assignment: Assignment) -> str:
    lines = [f"{name}={assignment[name]}" for name in sorted(model.exogenous)]
    lines += [f"{name}={assignment[name]}" for name in sorted(model.endogenous)]
    return "\n".join(lines) + "\n"
