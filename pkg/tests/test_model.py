import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalforge import (
    BOOL,
    CausalModel,
    EvaluationError,
    GeneratorParams,
    Input,
    Intervention,
    StructuralEquation,
    Variable,
    evaluate,
    generate_model,
    naive_evaluate,
    validate_model,
)
from causalforge.expr import Var

from conftest import PIZZA_TABLE, pizza_input


def two_cycle_model():
    v1 = Variable("V1", "endogenous", BOOL)
    v2 = Variable("V2", "endogenous", BOOL)
    return CausalModel(
        [BOOL],
        [],
        [v1, v2],
        [StructuralEquation("V1", Var("V2")), StructuralEquation("V2", Var("V1"))],
    )


def test_pizza_validates(pizza):
    assert validate_model(pizza) == []


def test_cycle_is_reported():
    violations = validate_model(two_cycle_model())
    kinds = {v.kind for v in violations}
    assert "cycle" in kinds


def test_unknown_variable_is_reported():
    v1 = Variable("V1", "endogenous", BOOL)
    model = CausalModel([BOOL], [], [v1], [StructuralEquation("V1", Var("W"))])
    violations = validate_model(model)
    assert any(v.kind == "unknown-variable" and "W" in v.message for v in violations)


def test_parent_mismatch_is_reported():
    u = Variable("U", "exogenous", BOOL)
    v1 = Variable("V1", "endogenous", BOOL)
    model = CausalModel(
        [BOOL], [u], [v1], [StructuralEquation("V1", Var("U"), parents=("U", "V1"))]
    )
    assert any(v.kind == "parent-mismatch" for v in validate_model(model))


def test_missing_equation_is_reported():
    v1 = Variable("V1", "endogenous", BOOL)
    model = CausalModel([BOOL], [], [v1], [])
    assert any(v.kind == "missing-equation" for v in validate_model(model))


def test_equation_on_exogenous_is_reported():
    u = Variable("U", "exogenous", BOOL)
    model = CausalModel([BOOL], [u], [], [StructuralEquation("U", Var("U"))])
    assert any(v.kind in ("extra-equation", "cycle") for v in validate_model(model))


def test_evaluate_refuses_invalid_models():
    with pytest.raises(Exception):
        evaluate(two_cycle_model(), Input({}))


@pytest.mark.parametrize("u1,u2", sorted(PIZZA_TABLE))
def test_pizza_truth_table(pizza, u1, u2):
    assignment = evaluate(pizza, pizza_input(u1, u2))
    v1, v2 = PIZZA_TABLE[(u1, u2)]
    assert assignment["U1"] == u1 and assignment["U2"] == u2
    assert assignment["V1"] == v1
    assert assignment["V2"] == v2


def test_do_on_endogenous_overrides_equation(pizza):
    assignment = evaluate(pizza, pizza_input("1", "1"), [Intervention("V1", "1")])
    assert assignment["V1"] == "1"
    assert assignment["V2"] == "1"


def test_set_on_exogenous_reassigns_the_input(pizza):
    assignment = evaluate(pizza, pizza_input("1", "1"), [Intervention("U2", "0")])
    assert assignment["U2"] == "0"
    assert assignment["V1"] == "1"


def test_identity_equation():
    u = Variable("U", "exogenous", BOOL)
    x = Variable("X", "endogenous", BOOL)
    model = CausalModel([BOOL], [u], [x], [StructuralEquation("X", Var("U"))])
    for v in ("0", "1"):
        assert evaluate(model, Input({"U": v}))["X"] == v


def test_conflicting_interventions_rejected(pizza):
    with pytest.raises(EvaluationError):
        evaluate(
            pizza,
            pizza_input("1", "1"),
            [Intervention("V1", "1"), Intervention("V1", "0")],
        )


def test_value_outside_domain_rejected(pizza):
    with pytest.raises(EvaluationError):
        evaluate(pizza, Input({"U1": "2", "U2": "0"}))
    with pytest.raises(EvaluationError):
        evaluate(pizza, pizza_input("1", "1"), [Intervention("V1", "7")])


def test_incomplete_or_overfull_input_rejected(pizza):
    with pytest.raises(EvaluationError):
        evaluate(pizza, Input({"U1": "1"}))
    with pytest.raises(EvaluationError):
        evaluate(pizza, Input({"U1": "1", "U2": "0", "V1": "1"}))


def test_unknown_intervention_variable_rejected(pizza):
    with pytest.raises(EvaluationError):
        evaluate(pizza, pizza_input("1", "1"), [Intervention("W", "1")])


def test_evaluate_is_deterministic(pizza):
    first = evaluate(pizza, pizza_input("1", "0"))
    second = evaluate(pizza, pizza_input("1", "0"))
    assert first == second


def test_intervening_with_the_current_value_changes_nothing(pizza):
    for u1, u2 in PIZZA_TABLE:
        input = pizza_input(u1, u2)
        baseline = evaluate(pizza, input)
        for name in ("V1", "V2"):
            forced = evaluate(pizza, input, [Intervention(name, baseline[name])])
            assert forced == baseline


def _all_inputs(model):
    import itertools

    names = sorted(model.exogenous)
    domains = [model.exogenous[n].domain.values for n in names]
    for combo in itertools.product(*domains):
        yield Input(dict(zip(names, combo)))


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32),
    profile=st.sampled_from(["binary", "chain(3)", "poset(3)"]),
    equations=st.sampled_from(["expression", "table"]),
)
def test_evaluate_matches_the_naive_oracle(seed, profile, equations):
    params = GeneratorParams(
        seed=seed, max_vars=6, domain_profile=profile, equation_profile=equations
    )
    model = generate_model(params)
    for input in _all_inputs(model):
        assert evaluate(model, input) == naive_evaluate(model, input)


def test_structural_equality_ignores_declaration_order(pizza):
    from causalforge import parse_model

    reordered = parse_model(
        "domain Bool { values 0 < 1 }\n"
        "endo V2 : Bool = V1\n"
        "endo V1 : Bool = U1 and not U2\n"
        "exo U2 : Bool\n"
        "exo U1 : Bool\n"
    )
    assert reordered == pizza
