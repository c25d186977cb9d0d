"""Influence graphs, explanation moulds, and reinforcement-explanation forging."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

from .domains import Ordering, compare, ordered_alternatives
from .model import Assignment, CausalModel, Input, Intervention, evaluate

Edge = tuple[str, str]


@dataclass(frozen=True)
class InfluenceGraph:
    """All variables plus one directed edge from each parent to its child."""

    nodes: frozenset[str]
    influences: frozenset[Edge]


def influence_graph(model: CausalModel) -> InfluenceGraph:
    model.require_valid()
    edges = {
        (parent, target)
        for target, eq in model.equations.items()
        for parent in eq.parents
    }
    return InfluenceGraph(frozenset(model.variables), frozenset(edges))


class EdgeRole(Enum):
    ATTACK = "attack"
    SUPPORT = "support"
    NONE = "none"


@dataclass(frozen=True)
class EdgeWitness:
    """The strict-change witness behind a forged relation.

    Setting the source to ``alternative`` moves the target from
    ``baseline`` to ``outcome``, a strict change in the direction the
    relation promises.
    """

    alternative: str
    baseline: str
    outcome: str


@dataclass(frozen=True)
class RelationCharacterisation:
    """A named Boolean condition deciding whether an influence joins a relation."""

    name: str
    predicate: Callable[[CausalModel, Input, Edge, Sequence[Intervention]], bool]


@dataclass(frozen=True)
class ExplanationMould:
    """A non-empty set of relation characterisations with distinct names."""

    characterisations: tuple[RelationCharacterisation, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "characterisations", tuple(self.characterisations))
        if not self.characterisations:
            raise ValueError("an explanation mould needs at least one characterisation")
        names = [c.name for c in self.characterisations]
        if len(set(names)) != len(names):
            raise ValueError("characterisation names must be distinct")


@dataclass(frozen=True)
class ArgumentPolicy:
    """Which variables become arguments: all of them, the involved ones, or
    those with a forged path to a chosen target."""

    kind: str  # "all" | "involved" | "focused"
    target: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("all", "involved", "focused"):
            raise ValueError(f"unknown argument policy {self.kind!r}")
        if (self.kind == "focused") != (self.target is not None):
            raise ValueError("exactly the focused policy takes a target variable")

    @classmethod
    def all(cls) -> "ArgumentPolicy":
        return cls("all")

    @classmethod
    def involved(cls) -> "ArgumentPolicy":
        return cls("involved")

    @classmethod
    def focused(cls, target: str) -> "ArgumentPolicy":
        return cls("focused", target)

    @classmethod
    def parse(cls, text: str) -> "ArgumentPolicy":
        if text == "all":
            return cls.all()
        if text == "involved":
            return cls.involved()
        if text.startswith("focused:"):
            target = text.split(":", 1)[1]
            if target:
                return cls.focused(target)
        raise ValueError(f"unknown argument policy {text!r} (use all, involved or focused:<var>)")

    def render(self) -> str:
        return f"focused:{self.target}" if self.kind == "focused" else self.kind


@dataclass(frozen=True)
class ExplanationContext:
    """The local situation an explanation was forged for."""

    input_values: Mapping[str, str]
    interventions: tuple[Intervention, ...]
    values: Mapping[str, str]  # the full assignment
    kinds: Mapping[str, str]  # variable -> exogenous | endogenous
    binary: bool
    policy: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_values", dict(self.input_values))
        object.__setattr__(self, "interventions", tuple(self.interventions))
        object.__setattr__(self, "values", dict(self.values))
        object.__setattr__(self, "kinds", dict(self.kinds))


@dataclass(frozen=True)
class ArgumentativeExplanation:
    """An argumentation framework with one forged relation per characterisation."""

    arguments: frozenset[str]
    relations: tuple[tuple[str, frozenset[Edge]], ...]
    context: ExplanationContext

    def relation(self, name: str) -> frozenset[Edge]:
        for relation_name, edges in self.relations:
            if relation_name == name:
                return edges
        raise KeyError(name)


@dataclass(frozen=True)
class ReinforcementExplanation:
    """A bipolar AF forged by the reinforcement mould, local to one input."""

    arguments: frozenset[str]
    attacks: frozenset[Edge]
    supports: frozenset[Edge]
    context: ExplanationContext
    witnesses: Mapping[Edge, EdgeWitness] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "witnesses", dict(self.witnesses))


def set_value(
    model: CausalModel,
    input: Input,
    interventions: Sequence[Intervention],
    variable: str,
    value: str,
) -> Assignment:
    """Evaluate with ``variable`` forced to ``value`` on top of the context.

    Any baseline intervention on the same variable is replaced, so the
    probe always wins; everything else stays the same.
    """
    kept = [iv for iv in interventions if iv.variable != variable]
    kept.append(Intervention(variable, value))
    return evaluate(model, input, kept)


def _classify_edge(
    model: CausalModel,
    input: Input,
    interventions: Sequence[Intervention],
    edge: Edge,
    base: Assignment,
) -> tuple[EdgeRole, EdgeWitness | None]:
    source, target = edge
    source_domain = model.domain_of(source)
    target_domain = model.domain_of(target)
    current_source = base[source]
    current_target = base[target]
    below, above = ordered_alternatives(source_domain, current_source)

    attack_ok = support_ok = True
    attack_witness: EdgeWitness | None = None
    support_witness: EdgeWitness | None = None

    # Alternatives below first, then above, each in declared domain order.
    for alternative in sorted(below, key=source_domain.index):
        outcome = set_value(model, input, interventions, source, alternative)[target]
        relation = compare(target_domain, outcome, current_target)
        if relation not in (Ordering.GREATER, Ordering.EQUAL):
            attack_ok = False
        elif relation is Ordering.GREATER and attack_witness is None:
            attack_witness = EdgeWitness(alternative, current_target, outcome)
        if relation not in (Ordering.LESS, Ordering.EQUAL):
            support_ok = False
        elif relation is Ordering.LESS and support_witness is None:
            support_witness = EdgeWitness(alternative, current_target, outcome)
        if not attack_ok and not support_ok:
            return EdgeRole.NONE, None
    for alternative in sorted(above, key=source_domain.index):
        outcome = set_value(model, input, interventions, source, alternative)[target]
        relation = compare(target_domain, outcome, current_target)
        if relation not in (Ordering.LESS, Ordering.EQUAL):
            attack_ok = False
        elif relation is Ordering.LESS and attack_witness is None:
            attack_witness = EdgeWitness(alternative, current_target, outcome)
        if relation not in (Ordering.GREATER, Ordering.EQUAL):
            support_ok = False
        elif relation is Ordering.GREATER and support_witness is None:
            support_witness = EdgeWitness(alternative, current_target, outcome)
        if not attack_ok and not support_ok:
            return EdgeRole.NONE, None

    if attack_ok and attack_witness is not None:
        return EdgeRole.ATTACK, attack_witness
    if support_ok and support_witness is not None:
        return EdgeRole.SUPPORT, support_witness
    return EdgeRole.NONE, None


def characterise_reinforcement(
    model: CausalModel,
    input: Input,
    edge: Edge,
    interventions: Sequence[Intervention] = (),
) -> EdgeRole:
    """Classify one influence as attack, support or none for the given input.

    Attack: every strictly greater alternative value of the source keeps the
    target at or below its current value, every strictly smaller alternative
    keeps it at or above, and at least one alternative moves it strictly in
    the promised direction. Support is the mirror image. Outcomes that are
    incomparable to the current target value defeat both readings.
    """
    graph = influence_graph(model)
    if edge not in graph.influences:
        raise ValueError(f"({edge[0]}, {edge[1]}) is not an influence of the model")
    base = evaluate(model, input, interventions)
    role, _ = _classify_edge(model, input, interventions, edge, base)
    return role


def _reinforcement_predicate(role: EdgeRole):
    def predicate(
        model: CausalModel,
        input: Input,
        edge: Edge,
        interventions: Sequence[Intervention] = (),
    ) -> bool:
        base = evaluate(model, input, interventions)
        found, _ = _classify_edge(model, input, interventions, edge, base)
        return found is role

    return predicate


def reinforcement_mould() -> ExplanationMould:
    """The built-in mould: one attack and one support characterisation."""
    return ExplanationMould(
        (
            RelationCharacterisation("attack", _reinforcement_predicate(EdgeRole.ATTACK)),
            RelationCharacterisation("support", _reinforcement_predicate(EdgeRole.SUPPORT)),
        )
    )


def _select_arguments(
    policy: ArgumentPolicy,
    graph: InfluenceGraph,
    relations: Sequence[tuple[str, frozenset[Edge]]],
) -> frozenset[str]:
    forged: set[Edge] = set()
    for _, edges in relations:
        forged.update(edges)
    if policy.kind == "all":
        return graph.nodes
    involved = {a for a, _ in forged} | {b for _, b in forged}
    if policy.kind == "involved":
        return frozenset(involved)
    target = policy.target
    if target not in graph.nodes:
        raise ValueError(f"focused policy targets unknown variable {target!r}")
    # ancestors of the target along forged edges, plus the target itself
    reached = {target}
    frontier = [target]
    while frontier:
        node = frontier.pop()
        for a, b in forged:
            if b == node and a not in reached:
                reached.add(a)
                frontier.append(a)
    return frozenset(reached)


def _context(
    model: CausalModel,
    input: Input,
    interventions: Sequence[Intervention],
    policy: ArgumentPolicy,
    base: Assignment,
) -> ExplanationContext:
    return ExplanationContext(
        input_values=dict(input.values),
        interventions=tuple(interventions),
        values=dict(base.values),
        kinds={name: var.kind for name, var in model.variables.items()},
        binary=model.is_binary,
        policy=policy.render(),
    )


def forge_explanation(
    model: CausalModel,
    input: Input,
    mould: ExplanationMould,
    policy: ArgumentPolicy = ArgumentPolicy.all(),
    interventions: Sequence[Intervention] = (),
) -> ArgumentativeExplanation:
    """Apply every characterisation to every influence and restrict to the
    chosen argument set.

    Relations are computed over the full influence set first and only then
    intersected with arguments x arguments, so the involved/focused
    policies see the complete forged picture.
    """
    model.require_valid()
    graph = influence_graph(model)
    edges = sorted(graph.influences)
    relations: list[tuple[str, frozenset[Edge]]] = []
    for characterisation in mould.characterisations:
        forged = frozenset(
            edge
            for edge in edges
            if characterisation.predicate(model, input, edge, interventions)
        )
        relations.append((characterisation.name, forged))
    arguments = _select_arguments(policy, graph, relations)
    restricted = tuple(
        (name, frozenset(e for e in edges_ if e[0] in arguments and e[1] in arguments))
        for name, edges_ in relations
    )
    base = evaluate(model, input, interventions)
    return ArgumentativeExplanation(
        arguments, restricted, _context(model, input, interventions, policy, base)
    )


def extract_rx(
    model: CausalModel,
    input: Input,
    policy: ArgumentPolicy = ArgumentPolicy.all(),
    interventions: Sequence[Intervention] = (),
) -> ReinforcementExplanation:
    """Forge the reinforcement explanation for (model, input).

    Equivalent to forging with the built-in reinforcement mould, but
    classifies each edge once and records the strict-change witnesses.
    """
    model.require_valid()
    graph = influence_graph(model)
    base = evaluate(model, input, interventions)
    attacks: set[Edge] = set()
    supports: set[Edge] = set()
    witnesses: dict[Edge, EdgeWitness] = {}
    for edge in sorted(graph.influences):
        role, witness = _classify_edge(model, input, interventions, edge, base)
        if role is EdgeRole.ATTACK:
            attacks.add(edge)
        elif role is EdgeRole.SUPPORT:
            supports.add(edge)
        if witness is not None:
            witnesses[edge] = witness
    relations = [("attack", frozenset(attacks)), ("support", frozenset(supports))]
    arguments = _select_arguments(policy, graph, relations)
    return ReinforcementExplanation(
        arguments=arguments,
        attacks=frozenset(e for e in attacks if e[0] in arguments and e[1] in arguments),
        supports=frozenset(e for e in supports if e[0] in arguments and e[1] in arguments),
        context=_context(model, input, interventions, policy, base),
        witnesses={e: w for e, w in witnesses.items() if e[0] in arguments and e[1] in arguments},
    )
