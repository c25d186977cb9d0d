"""Causal models over finite ordered domains: structure, validation, evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .domains import Domain
from .expr import Expression, ExprTypeError, check_expr, compile_expr, free_vars

EXOGENOUS = "exogenous"
ENDOGENOUS = "endogenous"


class ModelError(Exception):
    """The model is structurally unusable for the requested operation."""


class EvaluationError(Exception):
    """Bad input or interventions for an evaluation request."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # EXOGENOUS | ENDOGENOUS
    domain: Domain

    def __post_init__(self) -> None:
        if self.kind not in (EXOGENOUS, ENDOGENOUS):
            raise ValueError(f"variable {self.name!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class StructuralEquation:
    """Defines one endogenous variable as a function of its parents.

    When ``parents`` is omitted it is inferred as the sorted free variables
    of the body. Equality ignores parent order.
    """

    target: str
    body: Expression
    parents: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.parents:
            object.__setattr__(self, "parents", tuple(sorted(free_vars(self.body))))
        else:
            object.__setattr__(self, "parents", tuple(self.parents))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructuralEquation):
            return NotImplemented
        return (
            self.target == other.target
            and self.body == other.body
            and frozenset(self.parents) == frozenset(other.parents)
        )

    def __hash__(self) -> int:
        return hash((self.target, self.body, frozenset(self.parents)))


@dataclass(frozen=True)
class Input:
    """A total assignment of values to the exogenous variables."""

    values: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(self.values))


@dataclass(frozen=True)
class Intervention:
    """set(variable = value): a do() on an endogenous variable, a reassignment on an exogenous one."""

    variable: str
    value: str


@dataclass(frozen=True)
class Assignment:
    """A total map variable -> value produced by evaluation."""

    values: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(self.values))

    def __getitem__(self, name: str) -> str:
        return self.values[name]

    def items(self):
        return self.values.items()


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str


class CausalModel:
    """Exogenous and endogenous variables, their domains, and one equation per endogenous variable.

    Instances are immutable once constructed; validation, the topological
    order and the compiled evaluation plan are computed once and shared.
    """

    def __init__(
        self,
        domains: Iterable[Domain],
        exogenous: Iterable[Variable],
        endogenous: Iterable[Variable],
        equations: Iterable[StructuralEquation],
    ):
        self.domains: dict[str, Domain] = {}
        for d in domains:
            if d.name in self.domains and self.domains[d.name] != d:
                raise ValueError(f"two different domains named {d.name!r}")
            self.domains[d.name] = d
        self.exogenous: dict[str, Variable] = {v.name: v for v in exogenous}
        self.endogenous: dict[str, Variable] = {v.name: v for v in endogenous}
        self.equations: dict[str, StructuralEquation] = {e.target: e for e in equations}

    # -- structure ---------------------------------------------------------

    @property
    def variables(self) -> dict[str, Variable]:
        merged = dict(self.exogenous)
        merged.update(self.endogenous)
        return merged

    def variable(self, name: str) -> Variable:
        var = self.exogenous.get(name) or self.endogenous.get(name)
        if var is None:
            raise KeyError(name)
        return var

    def domain_of(self, name: str) -> Domain:
        return self.variable(name).domain

    @cached_property
    def is_binary(self) -> bool:
        return all(v.domain.is_binary for v in self.variables.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalModel):
            return NotImplemented
        return (
            self.domains == other.domains
            and self.exogenous == other.exogenous
            and self.endogenous == other.endogenous
            and self.equations == other.equations
        )

    def __repr__(self) -> str:
        return (
            f"CausalModel(exogenous={sorted(self.exogenous)}, "
            f"endogenous={sorted(self.endogenous)})"
        )

    # -- validation ----------------------------------------------------------

    @cached_property
    def violations(self) -> tuple[Violation, ...]:
        return tuple(_validate(self))

    def require_valid(self) -> None:
        if self.violations:
            summary = "; ".join(v.message for v in self.violations[:3])
            raise ModelError(f"model does not validate: {summary}")

    # -- evaluation plan -----------------------------------------------------

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        """Endogenous variables ordered so every parent precedes its child."""
        self.require_valid()
        order: list[str] = []
        placed = set(self.exogenous)
        remaining = dict(self.equations)
        while remaining:
            ready = sorted(
                t for t, eq in remaining.items() if all(p in placed for p in eq.parents)
            )
            if not ready:  # unreachable once validation passed
                raise ModelError("parent graph contains a cycle")
            order.extend(ready)
            placed.update(ready)
            for t in ready:
                del remaining[t]
        return tuple(order)

    @cached_property
    def _plan(self) -> tuple[tuple[str, object], ...]:
        resolver = lambda name: self.variable(name).domain
        steps = []
        for target in self.topological_order:
            eq = self.equations[target]
            steps.append((target, compile_expr(eq.body, self.domain_of(target), resolver)))
        return tuple(steps)


def _validate(model: CausalModel) -> list[Violation]:
    found: list[Violation] = []
    names: set[str] = set()
    for name in list(model.exogenous) + list(model.endogenous):
        if name in names:
            found.append(Violation("duplicate-variable", name, f"variable {name!r} declared twice"))
        names.add(name)
    for var in model.variables.values():
        declared = model.domains.get(var.domain.name)
        if declared is None or declared != var.domain:
            found.append(
                Violation(
                    "unknown-domain",
                    var.name,
                    f"variable {var.name!r} references undeclared domain {var.domain.name!r}",
                )
            )
    for name in model.endogenous:
        if name not in model.equations:
            found.append(
                Violation("missing-equation", name, f"endogenous variable {name!r} has no equation")
            )
    for target, eq in model.equations.items():
        if target in model.exogenous:
            found.append(
                Violation("extra-equation", target, f"exogenous variable {target!r} has an equation")
            )
            continue
        if target not in model.endogenous:
            found.append(
                Violation("unknown-variable", target, f"equation targets undeclared variable {target!r}")
            )
            continue
        unknown = [p for p in eq.parents if p not in model.variables]
        if unknown:
            for p in sorted(unknown):
                found.append(
                    Violation("unknown-variable", target, f"equation for {target!r} references unknown variable {p!r}")
                )
            continue
        if free_vars(eq.body) != frozenset(eq.parents):
            found.append(
                Violation(
                    "parent-mismatch",
                    target,
                    f"equation for {target!r}: declared parents do not match the body's free variables",
                )
            )
            continue
        if target in eq.parents:
            found.append(
                Violation("cycle", target, f"equation for {target!r} references its own target")
            )
            continue
        resolver = lambda name: model.variable(name).domain
        try:
            check_expr(eq.body, model.domain_of(target), resolver)
        except ExprTypeError as err:
            found.append(Violation(err.kind, target, f"equation for {target!r}: {err.message}"))
    cycle = _find_cycle(model)
    if cycle:
        found.append(
            Violation("cycle", cycle[0], "parent graph contains a cycle: " + " -> ".join(cycle))
        )
    if not model.variables:
        found.append(Violation("empty-model", "", "model declares no variables"))
    return found


def _find_cycle(model: CausalModel) -> list[str] | None:
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(name: str) -> list[str] | None:
        state[name] = 1
        stack.append(name)
        eq = model.equations.get(name)
        for parent in eq.parents if eq else ():
            mark = state.get(parent, 0)
            if mark == 1:
                return stack[stack.index(parent) :] + [parent]
            if mark == 0:
                cycle = visit(parent)
                if cycle:
                    return cycle
        state[name] = 2
        stack.pop()
        return None

    for name in model.endogenous:
        if state.get(name, 0) == 0:
            cycle = visit(name)
            if cycle:
                return cycle
    return None


def validate_model(model: CausalModel) -> list[Violation]:
    """All well-formedness violations; an empty list means the model is usable."""
    return list(model.violations)


def _resolve_interventions(
    model: CausalModel, interventions: Sequence[Intervention]
) -> dict[str, str]:
    forced: dict[str, str] = {}
    for iv in interventions:
        try:
            var = model.variable(iv.variable)
        except KeyError:
            raise EvaluationError(f"intervention on unknown variable {iv.variable!r}") from None
        if iv.value not in var.domain:
            raise EvaluationError(
                f"intervention value {iv.value!r} is not in domain {var.domain.name!r} of {iv.variable!r}"
            )
        if iv.variable in forced:
            raise EvaluationError(f"conflicting interventions on {iv.variable!r}")
        forced[iv.variable] = iv.value
    return forced


def _exogenous_values(
    model: CausalModel, input: Input, forced: Mapping[str, str]
) -> dict[str, str]:
    values: dict[str, str] = {}
    extra = set(input.values) - set(model.exogenous)
    if extra:
        raise EvaluationError(
            "input assigns non-exogenous variable(s): " + ", ".join(sorted(extra))
        )
    for name, var in model.exogenous.items():
        if name in forced:
            values[name] = forced[name]
            continue
        if name not in input.values:
            raise EvaluationError(f"input is missing a value for {name!r}")
        token = input.values[name]
        if token not in var.domain:
            raise EvaluationError(
                f"input value {token!r} is not in domain {var.domain.name!r} of {name!r}"
            )
        values[name] = token
    return values


def evaluate(
    model: CausalModel, input: Input, interventions: Sequence[Intervention] = ()
) -> Assignment:
    """Evaluate the model under an input and interventions.

    Exogenous values come from the input unless reassigned by an
    intervention; intervened endogenous variables take the constant value;
    every other endogenous variable is computed from its equation in
    topological order. Pure: identical arguments give identical assignments.
    """
    model.require_valid()
    forced = _resolve_interventions(model, interventions)
    values = _exogenous_values(model, input, forced)
    for target, fn in model._plan:
        values[target] = forced[target] if target in forced else fn(values)
    return Assignment(values)
