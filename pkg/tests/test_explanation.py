import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalforge import (
    ArgumentPolicy,
    BOOL,
    CausalModel,
    Domain,
    EdgeRole,
    ExplanationMould,
    GeneratorParams,
    Input,
    Intervention,
    StructuralEquation,
    Variable,
    characterise_reinforcement,
    extract_rx,
    forge_explanation,
    generate_model,
    influence_graph,
    reinforcement_mould,
)
from causalforge.expr import Var

from conftest import PIZZA_TABLE, pizza_input

PIZZA_EDGES = (("U1", "V1"), ("U2", "V1"), ("V1", "V2"))


# --- an independent oracle for the pizza model ------------------------------
# Hand-translated into integer arithmetic: V1 = U1 * (1 - U2), V2 = V1.


def pizza_oracle(u1: int, u2: int, forced: dict) -> dict:
    u1 = forced.get("U1", u1)
    u2 = forced.get("U2", u2)
    v1 = forced["V1"] if "V1" in forced else u1 * (1 - u2)
    v2 = forced["V2"] if "V2" in forced else v1
    return {"U1": u1, "U2": u2, "V1": v1, "V2": v2}


def test_the_oracle_reproduces_the_frozen_table():
    for (u1, u2), (v1, v2) in PIZZA_TABLE.items():
        out = pizza_oracle(int(u1), int(u2), {})
        assert (str(out["V1"]), str(out["V2"])) == (v1, v2)


def oracle_classify(u1: int, u2: int, edge: tuple[str, str]) -> EdgeRole:
    """Direct reading of the attack/support conditions for a binary parent:
    the single flipped value either moves the child with it (support),
    against it (attack), or not at all (none)."""
    source, target = edge
    baseline = pizza_oracle(u1, u2, {})
    flipped = 1 - baseline[source]
    outcome = pizza_oracle(u1, u2, {source: flipped})[target]
    if outcome == baseline[target]:
        return EdgeRole.NONE
    raised_source = flipped > baseline[source]
    raised_target = outcome > baseline[target]
    return EdgeRole.SUPPORT if raised_source == raised_target else EdgeRole.ATTACK


# Expectations frozen from the oracle above (u1, u2, edge) -> role.
EXPECTED_ROLES = {
    (u1, u2, edge): oracle_classify(u1, u2, edge)
    for u1 in (0, 1)
    for u2 in (0, 1)
    for edge in PIZZA_EDGES
}


def test_influence_graph_of_pizza(pizza):
    graph = influence_graph(pizza)
    assert graph.nodes == frozenset({"U1", "U2", "V1", "V2"})
    assert graph.influences == frozenset(PIZZA_EDGES)


def test_influence_graph_single_equation():
    u = Variable("U", "exogenous", BOOL)
    x = Variable("X", "endogenous", BOOL)
    model = CausalModel([BOOL], [u], [x], [StructuralEquation("X", Var("U"))])
    assert influence_graph(model).influences == frozenset({("U", "X")})


def test_influence_graph_without_endogenous_variables():
    roots = [Variable("A", "exogenous", BOOL), Variable("B", "exogenous", BOOL)]
    model = CausalModel([BOOL], roots, [], [])
    graph = influence_graph(model)
    assert graph.influences == frozenset()
    assert graph.nodes == frozenset({"A", "B"})


@pytest.mark.parametrize("u1", (0, 1))
@pytest.mark.parametrize("u2", (0, 1))
@pytest.mark.parametrize("edge", PIZZA_EDGES)
def test_classification_matches_the_oracle(pizza, u1, u2, edge):
    role = characterise_reinforcement(pizza, pizza_input(str(u1), str(u2)), edge)
    assert role is EXPECTED_ROLES[(u1, u2, edge)]


def test_golden_explanation_for_margherita_no_pineapple(pizza):
    rx = extract_rx(pizza, pizza_input("1", "0"))
    assert rx.arguments == frozenset({"U1", "U2", "V1", "V2"})
    assert rx.attacks == frozenset({("U2", "V1")})
    assert rx.supports == frozenset({("U1", "V1"), ("V1", "V2")})


def test_spelling_is_irrelevant_when_pineapple_is_present(pizza):
    role = characterise_reinforcement(pizza, pizza_input("1", "1"), ("U1", "V1"))
    assert role is EdgeRole.NONE


def test_involved_policy_drops_uninvolved_arguments(pizza):
    rx = extract_rx(pizza, pizza_input("1", "1"), ArgumentPolicy.involved())
    assert rx.arguments == frozenset({"U2", "V1", "V2"})
    assert rx.attacks == frozenset({("U2", "V1")})
    assert rx.supports == frozenset({("V1", "V2")})


def test_focused_policy_keeps_forged_ancestors(pizza):
    rx = extract_rx(pizza, pizza_input("1", "1"), ArgumentPolicy.focused("V1"))
    assert rx.arguments == frozenset({"U2", "V1"})
    assert rx.attacks == frozenset({("U2", "V1")})
    assert rx.supports == frozenset()
    full = extract_rx(pizza, pizza_input("1", "0"), ArgumentPolicy.focused("V2"))
    assert full.arguments == frozenset({"U1", "U2", "V1", "V2"})


def test_focused_policy_rejects_unknown_targets(pizza):
    with pytest.raises(ValueError):
        extract_rx(pizza, pizza_input("1", "0"), ArgumentPolicy.focused("W"))


def test_policy_parsing_roundtrip():
    for text in ("all", "involved", "focused:V2"):
        assert ArgumentPolicy.parse(text).render() == text
    with pytest.raises(ValueError):
        ArgumentPolicy.parse("focused:")
    with pytest.raises(ValueError):
        ArgumentPolicy.parse("some")


def test_empty_mould_rejected():
    with pytest.raises(ValueError):
        ExplanationMould(())


def test_duplicate_characterisation_names_rejected():
    mould = reinforcement_mould()
    with pytest.raises(ValueError):
        ExplanationMould((mould.characterisations[0], mould.characterisations[0]))


def test_singleton_domain_parent_forges_nothing():
    one = Domain("One", ("only",))
    u = Variable("U", "exogenous", one)
    x = Variable("X", "endogenous", one)
    model = CausalModel([one], [u], [x], [StructuralEquation("X", Var("U"))])
    role = characterise_reinforcement(model, Input({"U": "only"}), ("U", "X"))
    assert role is EdgeRole.NONE


def test_non_influence_edge_rejected(pizza):
    with pytest.raises(ValueError):
        characterise_reinforcement(pizza, pizza_input("1", "0"), ("U1", "V2"))


def _table_model(domain, mapping):
    from causalforge.expr import table_from_mapping

    u = Variable("A", "exogenous", domain)
    x = Variable("X", "endogenous", domain)
    body = table_from_mapping(["A"], {(k,): v for k, v in mapping.items()})
    return CausalModel([domain], [u], [x], [StructuralEquation("X", body)])


def test_gradual_identity_supports_at_every_point():
    from causalforge import chain

    level = chain("Level", ("low", "mid", "high"))
    model = _table_model(level, {"low": "low", "mid": "mid", "high": "high"})
    for value in level.values:
        role = characterise_reinforcement(model, Input({"A": value}), ("A", "X"))
        assert role is EdgeRole.SUPPORT


def test_gradual_inverter_attacks_at_every_point():
    from causalforge import chain

    level = chain("Level", ("low", "mid", "high"))
    model = _table_model(level, {"low": "high", "mid": "mid", "high": "low"})
    for value in level.values:
        role = characterise_reinforcement(model, Input({"A": value}), ("A", "X"))
        assert role is EdgeRole.ATTACK


def test_non_monotone_response_is_unclassified():
    from causalforge import chain

    level = chain("Level", ("low", "mid", "high"))
    # rises then falls: low->low, mid->high, high->mid
    model = _table_model(level, {"low": "low", "mid": "high", "high": "mid"})
    role = characterise_reinforcement(model, Input({"A": "mid"}), ("A", "X"))
    assert role is EdgeRole.NONE


def test_incomparable_outcomes_defeat_both_readings():
    flat = Domain("Flat", ("a", "b"))  # two unordered values
    ordered = Domain("Two", ("0", "1"), frozenset({("0", "1")}))
    u = Variable("A", "exogenous", ordered)
    x = Variable("X", "endogenous", flat)
    from causalforge.expr import table_from_mapping

    body = table_from_mapping(["A"], {("0",): "a", ("1",): "b"})
    model = CausalModel([flat, ordered], [u], [x], [StructuralEquation("X", body)])
    role = characterise_reinforcement(model, Input({"A": "0"}), ("A", "X"))
    assert role is EdgeRole.NONE


def test_extract_matches_generic_forging(pizza):
    mould = reinforcement_mould()
    for u1, u2 in PIZZA_TABLE:
        input = pizza_input(u1, u2)
        for policy in (ArgumentPolicy.all(), ArgumentPolicy.involved()):
            rx = extract_rx(pizza, input, policy)
            generic = forge_explanation(pizza, input, mould, policy)
            assert generic.arguments == rx.arguments
            assert generic.relation("attack") == rx.attacks
            assert generic.relation("support") == rx.supports


def test_extraction_is_deterministic(pizza):
    input = pizza_input("1", "0")
    first = extract_rx(pizza, input)
    second = extract_rx(pizza, input)
    assert first.attacks == second.attacks
    assert first.supports == second.supports
    assert first.arguments == second.arguments


def test_explaining_under_an_intervention(pizza):
    rx = extract_rx(pizza, pizza_input("1", "1"), interventions=[Intervention("V1", "1")])
    assert rx.context.values["V2"] == "1"
    # the probe on V1 replaces the standing intervention, so V1 -> V2 still supports
    assert ("V1", "V2") in rx.supports
    # but nothing can move the pinned V1
    assert ("U2", "V1") not in rx.attacks | rx.supports
    assert ("U1", "V1") not in rx.attacks | rx.supports


def test_witnesses_point_at_strict_changes(pizza):
    rx = extract_rx(pizza, pizza_input("1", "0"))
    witness = rx.witnesses[("U2", "V1")]
    assert witness.alternative == "1"
    assert witness.baseline == "1"
    assert witness.outcome == "0"


def test_locality_of_explanations(pizza):
    from causalforge.export import document_json, explanation_to_document

    def snapshot():
        return {
            (u1, u2): document_json(
                explanation_to_document(extract_rx(pizza, pizza_input(u1, u2)), "pizza")
            )
            for u1, u2 in PIZZA_TABLE
        }

    before = snapshot()
    extract_rx(pizza, pizza_input("0", "1"), interventions=[Intervention("V1", "1")])
    after = snapshot()
    assert before == after


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**63 - 1),
    profile=st.sampled_from(["binary", "chain(3)"]),
)
def test_extract_equals_generic_forging_on_fuzzed_models(seed, profile):
    params = GeneratorParams(seed=seed, max_vars=5, domain_profile=profile)
    model = generate_model(params)
    import itertools

    names = sorted(model.exogenous)
    combos = itertools.product(*(model.exogenous[n].domain.values for n in names))
    mould = reinforcement_mould()
    for combo in itertools.islice(combos, 4):
        input = Input(dict(zip(names, combo)))
        rx = extract_rx(model, input)
        generic = forge_explanation(model, input, mould)
        assert generic.relation("attack") == rx.attacks
        assert generic.relation("support") == rx.supports
