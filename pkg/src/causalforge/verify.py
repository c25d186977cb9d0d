"""Machine checks for every property an extracted explanation must satisfy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .domains import Ordering, compare, ordered_alternatives
from .explanation import (
    ArgumentPolicy,
    Edge,
    ReinforcementExplanation,
    extract_rx,
    influence_graph,
    set_value,
)
from .model import CausalModel, Input

PROPERTY_NAMES = (
    "uniqueness",
    "acyclicity",
    "unambiguity",
    "relevance",
    "counterfactuality",
    "(dis)agreement",
    "coherence",
    "reinforcement",
)

#: Properties that only make sense when every domain is the binary one.
BINARY_ONLY = ("counterfactuality", "(dis)agreement", "coherence")


@dataclass(frozen=True)
class PropertyResult:
    name: str
    applicable: bool
    passed: bool | None
    witness: str | None = None
    data: object = None

    def line(self) -> str:
        if not self.applicable:
            return f"{self.name}: not applicable"
        if self.passed:
            return f"{self.name}: pass"
        return f"{self.name}: fail ({self.witness})"


@dataclass(frozen=True)
class PropertyReport:
    results: tuple[PropertyResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if r.applicable)

    @property
    def failures(self) -> tuple[PropertyResult, ...]:
        return tuple(r for r in self.results if r.applicable and not r.passed)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def to_json(self) -> dict:
        return {
            "all_passed": self.passed,
            "properties": [
                {
                    "name": r.name,
                    "applicable": r.applicable,
                    "passed": r.passed,
                    "witness": r.witness,
                }
                for r in self.results
            ],
        }


class VerificationError(Exception):
    """The explanation does not belong to the supplied model and input."""


# --- accepted arguments ------------------------------------------------------


def accepted_arguments(rx: ReinforcementExplanation) -> frozenset[str]:
    """Arguments whose value is 1 in the explanation's context (binary models)."""
    if not rx.context.binary:
        raise ValueError("accepted arguments are only defined for binary models")
    return frozenset(a for a in rx.arguments if rx.context.values[a] == "1")


# --- coherence ---------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    """A sequence of arguments; consecutive pairs lie in a designated relation."""

    arguments: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arguments", tuple(self.arguments))
        if not self.arguments:
            raise ValueError("a path contains at least one argument")

    def edges(self) -> tuple[Edge, ...]:
        return tuple(zip(self.arguments, self.arguments[1:]))

    def follows(self, relation: frozenset[Edge]) -> bool:
        return all(edge in relation for edge in self.edges())


def is_attack_shaped(
    path: tuple[str, ...], attacks: frozenset[Edge], supports: frozenset[Edge]
) -> bool:
    """Supports with one final attack, or one attack then supports only."""
    edges = Path(path).edges()
    if not edges:
        return False
    ends_in_attack = edges[-1] in attacks and all(e in supports for e in edges[:-1])
    starts_with_attack = edges[0] in attacks and all(e in supports for e in edges[1:])
    return ends_in_attack or starts_with_attack


@dataclass(frozen=True)
class InternalIncoherence:
    """A path whose edges are supports except one attack at the start or end."""

    path: tuple[str, ...]


@dataclass(frozen=True)
class ExternalIncoherence:
    """Two set members reaching the same argument, one by pure support, one
    by an attack-shaped path."""

    source_supporting: str
    source_attacking: str
    meeting_point: str
    support_path: tuple[str, ...]
    attack_path: tuple[str, ...]


@dataclass(frozen=True)
class CoherenceResult:
    coherent: bool
    witness: InternalIncoherence | ExternalIncoherence | None = None


def _support_paths(
    supports: frozenset[Edge], start: str, nodes: Iterable[str]
) -> dict[str, tuple[str, ...]]:
    """Shortest pure-support path from start to each reachable node (incl. itself)."""
    paths: dict[str, tuple[str, ...]] = {start: (start,)}
    frontier = [start]
    while frontier:
        node = frontier.pop(0)
        for a, b in sorted(supports):
            if a == node and b not in paths:
                paths[b] = paths[node] + (b,)
                frontier.append(b)
    return paths


def _attack_shaped_paths(
    rx_attacks: frozenset[Edge],
    support_from: Mapping[str, dict[str, tuple[str, ...]]],
    start: str,
) -> Iterator[tuple[str, tuple[str, ...]]]:
    """Yield (endpoint, path) for paths from start that are supports with a
    single attack at the final step, or an attack first then supports."""
    for w, prefix in sorted(support_from[start].items()):
        for a, b in sorted(rx_attacks):
            if a == w:
                yield b, prefix + (b,)
    for a, b in sorted(rx_attacks):
        if a == start:
            for end, tail in sorted(support_from[b].items()):
                yield end, (start,) + tail


def _support_closures(
    rx: ReinforcementExplanation,
) -> dict[str, dict[str, tuple[str, ...]]]:
    return {
        arg: _support_paths(rx.supports, arg, rx.arguments) for arg in sorted(rx.arguments)
    }


def check_internal_coherence(
    rx: ReinforcementExplanation, subset: Iterable[str]
) -> CoherenceResult:
    """No two members of the subset may be joined by an attack-shaped path.

    The offending shapes are a chain of supports ending in a single attack,
    or a single attack followed by a chain of supports.
    """
    members = _validated_subset(rx, subset)
    support_from = _support_closures(rx)
    for x in sorted(members):
        for y, path in _attack_shaped_paths(rx.attacks, support_from, x):
            if y in members:
                return CoherenceResult(False, InternalIncoherence(path))
    return CoherenceResult(True)


def check_external_coherence(
    rx: ReinforcementExplanation, subset: Iterable[str]
) -> CoherenceResult:
    """No argument may be reached from one member by pure support and from
    another member by an attack-shaped path."""
    members = _validated_subset(rx, subset)
    support_from = _support_closures(rx)
    for y in sorted(members):
        shaped: dict[str, tuple[str, ...]] = {}
        for z, path in _attack_shaped_paths(rx.attacks, support_from, y):
            shaped.setdefault(z, path)
        for x in sorted(members):
            for z, support_path in sorted(support_from[x].items()):
                if z in shaped:
                    return CoherenceResult(
                        False,
                        ExternalIncoherence(x, y, z, support_path, shaped[z]),
                    )
    return CoherenceResult(True)


def _validated_subset(rx: ReinforcementExplanation, subset: Iterable[str]) -> frozenset[str]:
    members = frozenset(subset)
    stray = members - rx.arguments
    if stray:
        raise ValueError("subset contains non-arguments: " + ", ".join(sorted(stray)))
    return members


def check_witness(
    rx: ReinforcementExplanation,
    witness: InternalIncoherence | ExternalIncoherence,
) -> bool:
    """Re-check a coherence witness against the explanation's relations."""
    if isinstance(witness, InternalIncoherence):
        return is_attack_shaped(witness.path, rx.attacks, rx.supports)
    support_leg = Path(witness.support_path)
    return (
        support_leg.arguments[0] == witness.source_supporting
        and support_leg.arguments[-1] == witness.meeting_point
        and support_leg.follows(rx.supports)
        and witness.attack_path[0] == witness.source_attacking
        and witness.attack_path[-1] == witness.meeting_point
        and is_attack_shaped(witness.attack_path, rx.attacks, rx.supports)
    )


# --- brute-force path enumeration (the oracle the checks are tested against) --


def _enumerate_simple_support_paths(
    supports: frozenset[Edge], start: str
) -> Iterator[tuple[str, ...]]:
    def walk(path: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
        yield path
        for a, b in sorted(supports):
            if a == path[-1] and b not in path:
                yield from walk(path + (b,))

    yield from walk((start,))


def enumerate_internal_witnesses(
    rx: ReinforcementExplanation, subset: Iterable[str]
) -> list[tuple[str, ...]]:
    """Every attack-shaped path between subset members, by explicit enumeration."""
    members = _validated_subset(rx, subset)
    witnesses: list[tuple[str, ...]] = []
    for x in sorted(members):
        for prefix in _enumerate_simple_support_paths(rx.supports, x):
            for a, b in sorted(rx.attacks):
                if a == prefix[-1] and b in members:
                    witnesses.append(prefix + (b,))
        for a, b in sorted(rx.attacks):
            if a != x:
                continue
            for tail in _enumerate_simple_support_paths(rx.supports, b):
                if tail[-1] in members:
                    witnesses.append((x,) + tail)
    return witnesses


def enumerate_external_witnesses(
    rx: ReinforcementExplanation, subset: Iterable[str]
) -> list[tuple[str, str, str]]:
    """Every (supporting member, attacking member, meeting point) triple, by enumeration."""
    members = _validated_subset(rx, subset)
    triples: set[tuple[str, str, str]] = set()
    for y in sorted(members):
        reachable_shaped: set[str] = set()
        for prefix in _enumerate_simple_support_paths(rx.supports, y):
            for a, b in sorted(rx.attacks):
                if a == prefix[-1]:
                    reachable_shaped.add(b)
        for a, b in sorted(rx.attacks):
            if a == y:
                for tail in _enumerate_simple_support_paths(rx.supports, b):
                    reachable_shaped.add(tail[-1])
        for x in sorted(members):
            for path in _enumerate_simple_support_paths(rx.supports, x):
                if path[-1] in reachable_shaped:
                    triples.add((x, y, path[-1]))
    return sorted(triples)


# --- the full report ---------------------------------------------------------


def _find_cycle_in(edges: frozenset[Edge], nodes: Iterable[str]) -> list[str] | None:
    adjacency: dict[str, list[str]] = {}
    for a, b in sorted(edges):
        adjacency.setdefault(a, []).append(b)
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        state[node] = 1
        stack.append(node)
        for succ in adjacency.get(node, ()):
            mark = state.get(succ, 0)
            if mark == 1:
                return stack[stack.index(succ) :] + [succ]
            if mark == 0:
                found = visit(succ)
                if found:
                    return found
        stack.pop()
        state[node] = 2
        return None

    for node in sorted(nodes):
        if state.get(node, 0) == 0:
            found = visit(node)
            if found:
                return found
    return None


def _edge_text(edge: Edge) -> str:
    return f"{edge[0]} -> {edge[1]}"


def verify_properties(
    model: CausalModel, input: Input, rx: ReinforcementExplanation
) -> PropertyReport:
    """Check the explanation against every property it is supposed to satisfy.

    Binary-only properties are reported as not applicable on other models.
    Witnesses identify the offending edge, path or argument pair.
    """
    model.require_valid()
    if dict(rx.context.input_values) != dict(input.values):
        raise VerificationError("the explanation was forged for a different input")
    if not rx.arguments <= frozenset(model.variables):
        raise VerificationError("the explanation mentions variables the model lacks")

    interventions = rx.context.interventions
    policy = ArgumentPolicy.parse(rx.context.policy)
    forged = sorted(rx.attacks | rx.supports)
    values = rx.context.values
    results: list[PropertyResult] = []

    # uniqueness: re-extraction yields the identical relations
    again = extract_rx(model, input, policy, interventions)
    same = (
        again.arguments == rx.arguments
        and again.attacks == rx.attacks
        and again.supports == rx.supports
    )
    results.append(
        PropertyResult(
            "uniqueness",
            True,
            same,
            None if same else "re-extraction produced a different explanation",
        )
    )

    # acyclicity of the forged graph
    cycle = _find_cycle_in(rx.attacks | rx.supports, rx.arguments)
    results.append(
        PropertyResult(
            "acyclicity",
            True,
            cycle is None,
            None if cycle is None else "cycle: " + " -> ".join(cycle),
            data=cycle,
        )
    )

    # unambiguity: no edge is both attack and support
    overlap = sorted(rx.attacks & rx.supports)
    results.append(
        PropertyResult(
            "unambiguity",
            True,
            not overlap,
            None if not overlap else "both attack and support: " + _edge_text(overlap[0]),
            data=overlap or None,
        )
    )

    # relevance: every relation is an influence
    influences = influence_graph(model).influences
    stray = sorted((rx.attacks | rx.supports) - influences)
    results.append(
        PropertyResult(
            "relevance",
            True,
            not stray,
            None if not stray else "not an influence: " + _edge_text(stray[0]),
            data=stray or None,
        )
    )

    # counterfactuality (binary only): flipping a related parent flips the child
    if rx.context.binary:
        witness = None
        for source, target in forged:
            current = values[source]
            for alternative in model.domain_of(source).values:
                if alternative == current:
                    continue
                outcome = set_value(model, input, interventions, source, alternative)[target]
                if outcome == values[target]:
                    witness = (
                        f"{_edge_text((source, target))} with {source}={alternative} "
                        f"leaves {target}={outcome}"
                    )
                    break
            if witness:
                break
        results.append(PropertyResult("counterfactuality", True, witness is None, witness))
    else:
        results.append(PropertyResult("counterfactuality", False, None))

    # (dis)agreement (binary only): attackers differ, supporters agree
    if rx.context.binary:
        witness = None
        for source, target in sorted(rx.attacks):
            if values[source] == values[target]:
                witness = f"attack {_edge_text((source, target))} between equal values"
                break
        if witness is None:
            for source, target in sorted(rx.supports):
                if values[source] != values[target]:
                    witness = f"support {_edge_text((source, target))} between unequal values"
                    break
        results.append(PropertyResult("(dis)agreement", True, witness is None, witness))
    else:
        results.append(PropertyResult("(dis)agreement", False, None))

    # coherence of the accepted set (binary only)
    if rx.context.binary:
        accepted = accepted_arguments(rx)
        internal = check_internal_coherence(rx, accepted)
        external = check_external_coherence(rx, accepted)
        witness = None
        if not internal.coherent:
            assert isinstance(internal.witness, InternalIncoherence)
            witness = "internal: " + " -> ".join(internal.witness.path)
        elif not external.coherent:
            assert isinstance(external.witness, ExternalIncoherence)
            w = external.witness
            witness = (
                f"external: {w.source_supporting} and {w.source_attacking} "
                f"meet at {w.meeting_point}"
            )
        results.append(
            PropertyResult(
                "coherence",
                True,
                internal.coherent and external.coherent,
                witness,
                data=(internal, external),
            )
        )
    else:
        results.append(PropertyResult("coherence", False, None))

    # reinforcement: forged relations satisfy the weak monotonicity clauses
    witness = None
    for source, target in forged:
        is_attack = (source, target) in rx.attacks
        source_domain = model.domain_of(source)
        target_domain = model.domain_of(target)
        below, above = ordered_alternatives(source_domain, values[source])
        for alternative in sorted(below | above, key=source_domain.index):
            outcome = set_value(model, input, interventions, source, alternative)[target]
            relation = compare(target_domain, outcome, values[target])
            raised = alternative in above
            if is_attack:
                bad = relation not in ((Ordering.LESS, Ordering.EQUAL) if raised else (Ordering.GREATER, Ordering.EQUAL))
            else:
                bad = relation not in ((Ordering.GREATER, Ordering.EQUAL) if raised else (Ordering.LESS, Ordering.EQUAL))
            if bad:
                kind = "attack" if is_attack else "support"
                witness = (
                    f"{kind} {_edge_text((source, target))}: {source}={alternative} "
                    f"moves {target} the wrong way"
                )
                break
        if witness:
            break
    results.append(PropertyResult("reinforcement", True, witness is None, witness))

    return PropertyReport(tuple(results))
