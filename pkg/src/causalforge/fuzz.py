"""Random model generation, an independent oracle evaluator, and verification campaigns."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

from .domains import Domain, chain
from .dsl import parse_model, serialize_model
from .explanation import extract_rx
from .expr import (
    And,
    Cmp,
    Expression,
    IfThenElse,
    Lit,
    MinMax,
    Not,
    Or,
    Var,
    interpret_expr,
    table_from_mapping,
)
from .model import (
    ENDOGENOUS,
    EXOGENOUS,
    Assignment,
    CausalModel,
    EvaluationError,
    Input,
    Intervention,
    StructuralEquation,
    Variable,
    evaluate,
)
from .verify import (
    PROPERTY_NAMES,
    accepted_arguments,
    check_external_coherence,
    check_internal_coherence,
    enumerate_external_witnesses,
    enumerate_internal_witnesses,
    verify_properties,
)

CHECK_NAMES = PROPERTY_NAMES + ("oracle-equivalence", "coherence-oracle", "round-trip")

_EQUATION_PROFILES = ("expression", "table")


@dataclass(frozen=True)
class GeneratorParams:
    """Everything a campaign needs; generation is a pure function of these."""

    seed: int
    models: int = 100
    max_vars: int = 6
    max_parents: int = 3
    domain_profile: str = "binary"
    equation_profile: str = "expression"
    inputs_per_model: int = 32
    exhaustive_cap: int = 1024

    def __post_init__(self) -> None:
        if self.max_vars < 1:
            raise ValueError("max_vars must be at least 1")
        if self.max_parents < 1:
            raise ValueError("max_parents must be at least 1")
        if self.models < 0:
            raise ValueError("models must not be negative")
        if self.equation_profile not in _EQUATION_PROFILES:
            raise ValueError(f"unknown equation profile {self.equation_profile!r}")
        _parse_profile(self.domain_profile)


def _parse_profile(text: str) -> tuple[str, int]:
    cleaned = text.strip().lower().replace("random-poset", "poset")
    if cleaned == "binary":
        return ("binary", 2)
    for kind in ("chain", "poset"):
        if cleaned.startswith(kind):
            rest = cleaned[len(kind) :].strip("()")
            if rest.isdigit() and int(rest) >= 1:
                return (kind, int(rest))
    raise ValueError(f"unknown domain profile {text!r} (use binary, chain(k) or poset(k))")


def _profile_domains(rng: random.Random, profile: tuple[str, int]) -> list[Domain]:
    kind, k = profile
    if kind == "binary":
        return [Domain("Bool", ("0", "1"), frozenset({("0", "1")}))]
    if kind == "chain":
        tokens = ("low", "mid", "high") if k == 3 else tuple(f"c{i}" for i in range(k))
        return [chain(f"Chain{k}", tokens)]
    pool: list[Domain] = []
    for index in range(rng.randint(1, 3)):
        tokens = tuple("abcdefghijklmnopqrstuvwxyz"[i] for i in range(k))
        covers = frozenset(
            (tokens[i], tokens[j])
            for i in range(k)
            for j in range(i + 1, k)
            if rng.random() < 0.4
        )
        pool.append(Domain(f"P{index + 1}", tokens, covers))
    return pool


def _is_binary_shaped(domain: Domain) -> bool:
    return set(domain.values) == {"0", "1"} and domain.strict_order == frozenset({("0", "1")})


def _random_condition(rng: random.Random, candidates: list[Variable], depth: int) -> Expression:
    binary = [v for v in candidates if _is_binary_shaped(v.domain)]
    if depth <= 0 or rng.random() < 0.4:
        if binary and rng.random() < 0.8:
            return Var(rng.choice(binary).name)
        if candidates:
            var = rng.choice(candidates)
            op = rng.choice(("==", "!=", "<=", "<", ">=", ">"))
            if rng.random() < 0.5 and any(v.domain == var.domain and v.name != var.name for v in candidates):
                other = rng.choice(
                    [v for v in candidates if v.domain == var.domain and v.name != var.name]
                )
                return Cmp(op, Var(var.name), Var(other.name))
            return Cmp(op, Var(var.name), Lit(rng.choice(var.domain.values)))
        return Lit(rng.choice(("0", "1")))
    shape = rng.choice(("and", "or", "not"))
    if shape == "not":
        return Not(_random_condition(rng, candidates, depth - 1))
    left = _random_condition(rng, candidates, depth - 1)
    right = _random_condition(rng, candidates, depth - 1)
    return And(left, right) if shape == "and" else Or(left, right)


def _random_expr(
    rng: random.Random, expected: Domain, candidates: list[Variable], depth: int
) -> Expression:
    same = [v for v in candidates if v.domain == expected]
    if depth <= 0 or rng.random() < 0.25:
        if same and rng.random() < 0.8:
            return Var(rng.choice(same).name)
        return Lit(rng.choice(expected.values))
    shapes = ["ite"]
    if _is_binary_shaped(expected):
        shapes += ["and", "or", "not", "cmp"]
    elif expected.is_total:
        shapes += ["min", "max"]
    shape = rng.choice(shapes)
    if shape == "ite":
        return IfThenElse(
            _random_condition(rng, candidates, depth - 1),
            _random_expr(rng, expected, candidates, depth - 1),
            _random_expr(rng, expected, candidates, depth - 1),
        )
    if shape in ("min", "max"):
        return MinMax(
            shape,
            _random_expr(rng, expected, candidates, depth - 1),
            _random_expr(rng, expected, candidates, depth - 1),
        )
    if shape == "not":
        return Not(_random_condition(rng, candidates, depth - 1))
    if shape == "cmp":
        return _random_condition(rng, candidates, 0)
    left = _random_condition(rng, candidates, depth - 1)
    right = _random_condition(rng, candidates, depth - 1)
    return And(left, right) if shape == "and" else Or(left, right)


def _random_table(
    rng: random.Random, expected: Domain, parents: list[Variable]
) -> Expression:
    rows = {
        combo: rng.choice(expected.values)
        for combo in itertools.product(*(p.domain.values for p in parents))
    }
    return table_from_mapping([p.name for p in parents], rows)


def generate_model(params: GeneratorParams) -> CausalModel:
    """A random validated model; the same parameters always give the same model."""
    rng = random.Random(params.seed)
    pool = _profile_domains(rng, _parse_profile(params.domain_profile))
    total = rng.randint(1, params.max_vars)
    exo_count = rng.randint(1, total)
    exogenous = [Variable(f"U{i + 1}", EXOGENOUS, rng.choice(pool)) for i in range(exo_count)]
    endogenous: list[Variable] = []
    equations: list[StructuralEquation] = []
    preceding: list[Variable] = list(exogenous)
    for j in range(total - exo_count):
        var = Variable(f"V{j + 1}", ENDOGENOUS, rng.choice(pool))
        count = rng.randint(1, min(params.max_parents, len(preceding)))
        candidates = rng.sample(preceding, count)
        if params.equation_profile == "table":
            body = _random_table(rng, var.domain, candidates)
        else:
            body = _random_expr(rng, var.domain, candidates, depth=3)
        equations.append(StructuralEquation(var.name, body))
        endogenous.append(var)
        preceding.append(var)
    used = {v.domain.name: v.domain for v in exogenous + endogenous}
    model = CausalModel(
        [used[name] for name in sorted(used)], exogenous, endogenous, equations
    )
    if model.violations:
        raise AssertionError(
            f"generator produced an invalid model for seed {params.seed}: {model.violations[0].message}"
        )
    return model


# --- independent oracle evaluator ---------------------------------------------


def naive_evaluate(
    model: CausalModel, input: Input, interventions: Sequence[Intervention] = ()
) -> Assignment:
    """Evaluate by direct recursion over parents, with no topological pass
    and no memoization. Semantics match evaluate exactly; the two are
    cross-checked against each other in every campaign."""
    model.require_valid()
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
    extra = set(input.values) - set(model.exogenous)
    if extra:
        raise EvaluationError(
            "input assigns non-exogenous variable(s): " + ", ".join(sorted(extra))
        )
    for name, var in model.exogenous.items():
        if name in forced:
            continue
        if name not in input.values:
            raise EvaluationError(f"input is missing a value for {name!r}")
        if input.values[name] not in var.domain:
            raise EvaluationError(
                f"input value {input.values[name]!r} is not in domain {var.domain.name!r} of {name!r}"
            )

    def resolver(name: str) -> Domain:
        return model.variable(name).domain

    def value_of(name: str) -> str:
        if name in forced:
            return forced[name]
        var = model.variable(name)
        if var.kind == EXOGENOUS:
            return input.values[name]
        equation = model.equations[name]
        env = {parent: value_of(parent) for parent in equation.parents}
        return interpret_expr(equation.body, var.domain, resolver, env)

    return Assignment({name: value_of(name) for name in model.variables})


# --- campaigns ----------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    check: str
    model_text: str
    input_line: str
    detail: str


@dataclass
class CampaignReport:
    params: GeneratorParams
    models_tested: int = 0
    inputs_tested: int = 0
    oracle_triples: int = 0
    coherence_checked: int = 0
    failures: dict[str, int] = field(default_factory=dict)
    counterexamples: dict[str, Counterexample] = field(default_factory=dict)
    duration_seconds: float = 0.0

    @property
    def total_failures(self) -> int:
        return sum(self.failures.values())

    def lines(self) -> list[str]:
        out = [
            f"models tested:      {self.models_tested}",
            f"inputs tested:      {self.inputs_tested}",
            f"oracle triples:     {self.oracle_triples}",
            f"coherence checks:   {self.coherence_checked}",
            f"duration:           {self.duration_seconds:.2f}s",
        ]
        for name in CHECK_NAMES:
            out.append(f"{name}: {self.failures.get(name, 0)} failure(s)")
        for name, ce in sorted(self.counterexamples.items()):
            out.append(f"first counterexample for {name}: {ce.detail}")
            out.append(ce.model_text.rstrip())
            if ce.input_line:
                out.append(ce.input_line)
        return out


def render_input_line(input: Input) -> str:
    pairs = " ".join(f"{name}={value}" for name, value in sorted(input.values.items()))
    return f"input {pairs}".rstrip()


def parse_input_line(line: str) -> Input:
    body = line.strip()
    if body.startswith("input"):
        body = body[len("input") :]
    values: dict[str, str] = {}
    for chunk in body.split():
        if "=" not in chunk:
            raise ValueError(f"malformed input assignment {chunk!r}")
        name, value = chunk.split("=", 1)
        values[name] = value
    return Input(values)


def _inputs_for(
    model: CausalModel, params: GeneratorParams, rng: random.Random
) -> Iterator[Input]:
    names = sorted(model.exogenous)
    domains = [model.exogenous[name].domain for name in names]
    total = 1
    for domain in domains:
        total *= len(domain.values)
    if total <= params.exhaustive_cap:
        for combo in itertools.product(*(d.values for d in domains)):
            yield Input(dict(zip(names, combo)))
    else:
        for _ in range(params.inputs_per_model):
            yield Input({name: rng.choice(d.values) for name, d in zip(names, domains)})


def _probe_interventions(
    model: CausalModel, rng: random.Random
) -> list[tuple[Intervention, ...]]:
    probes: list[tuple[Intervention, ...]] = [()]
    names = sorted(model.variables)
    for _ in range(2):
        name = rng.choice(names)
        domain = model.variable(name).domain
        probes.append((Intervention(name, rng.choice(domain.values)),))
    return probes


def run_campaign(params: GeneratorParams) -> CampaignReport:
    """Generate models, extract and verify explanations, and cross-check the
    evaluators and coherence algorithms. Failures become report content with
    a replayable counterexample; healthy code reports zero failures."""
    start = time.perf_counter()
    report = CampaignReport(params=params, failures={name: 0 for name in CHECK_NAMES})
    seed_rng = random.Random(params.seed)
    for _ in range(params.models):
        model_seed = seed_rng.getrandbits(63)
        model = generate_model(replace(params, seed=model_seed))
        text = serialize_model(model)

        def note(check: str, input_line: str, detail: str) -> None:
            report.failures[check] = report.failures.get(check, 0) + 1
            report.counterexamples.setdefault(
                check, Counterexample(check, text, input_line, detail)
            )

        if parse_model(text) != model:
            note("round-trip", "", "parse(serialize(model)) differs from the model")
        sample_rng = random.Random(model_seed ^ 0x9E3779B97F4A7C15)
        for input in _inputs_for(model, params, sample_rng):
            report.inputs_tested += 1
            input_line = render_input_line(input)
            rx = extract_rx(model, input)
            prop_report = verify_properties(model, input, rx)
            for result in prop_report.failures:
                note(result.name, input_line, result.witness or result.name)
            for probe in _probe_interventions(model, sample_rng):
                fast = evaluate(model, input, probe)
                slow = naive_evaluate(model, input, probe)
                report.oracle_triples += 1
                if fast.values != slow.values:
                    shown = " ".join(f"{iv.variable}={iv.value}" for iv in probe)
                    note(
                        "oracle-equivalence",
                        input_line,
                        f"evaluators disagree under interventions [{shown}]",
                    )
            subsets = [rx.arguments]
            if rx.context.binary:
                subsets.append(accepted_arguments(rx))
            for subset in subsets:
                fast_internal = check_internal_coherence(rx, subset).coherent
                slow_internal = not enumerate_internal_witnesses(rx, subset)
                fast_external = check_external_coherence(rx, subset).coherent
                slow_external = not enumerate_external_witnesses(rx, subset)
                report.coherence_checked += 1
                if fast_internal != slow_internal or fast_external != slow_external:
                    note(
                        "coherence-oracle",
                        input_line,
                        "reachability and enumeration coherence checks disagree",
                    )
        report.models_tested += 1
    report.duration_seconds = time.perf_counter() - start
    return report


def replay_counterexample(ce: Counterexample) -> str | None:
    """Re-run the failed check on a counterexample; the failure detail again,
    or None if it no longer fails."""
    model = parse_model(ce.model_text)
    if ce.check == "round-trip":
        if parse_model(serialize_model(model)) != model:
            return "parse(serialize(model)) differs from the model"
        return None
    input = parse_input_line(ce.input_line)
    if ce.check == "oracle-equivalence":
        for probe in _probe_interventions(model, random.Random(0)):
            if evaluate(model, input, probe).values != naive_evaluate(model, input, probe).values:
                return "evaluators disagree"
        return None
    rx = extract_rx(model, input)
    if ce.check == "coherence-oracle":
        subsets = [rx.arguments]
        if rx.context.binary:
            subsets.append(accepted_arguments(rx))
        for subset in subsets:
            if check_internal_coherence(rx, subset).coherent != (
                not enumerate_internal_witnesses(rx, subset)
            ) or check_external_coherence(rx, subset).coherent != (
                not enumerate_external_witnesses(rx, subset)
            ):
                return "coherence checks disagree"
        return None
    prop_report = verify_properties(model, input, rx)
    for result in prop_report.failures:
        if result.name == ce.check:
            return result.witness or result.name
    return None
