import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalforge import (
    BOOL,
    CausalModel,
    GeneratorParams,
    ParseError,
    StructuralEquation,
    Variable,
    generate_model,
    parse_model,
    serialize_model,
)
from causalforge.expr import And, Not, Var, table_from_mapping


def test_pizza_parses_to_the_expected_structure(pizza):
    u1 = Variable("U1", "exogenous", BOOL)
    u2 = Variable("U2", "exogenous", BOOL)
    v1 = Variable("V1", "endogenous", BOOL)
    v2 = Variable("V2", "endogenous", BOOL)
    expected = CausalModel(
        [BOOL],
        [u1, u2],
        [v1, v2],
        [
            StructuralEquation("V1", And(Var("U1"), Not(Var("U2")))),
            StructuralEquation("V2", Var("V1")),
        ],
    )
    assert pizza == expected


def test_type_error_points_at_the_operator():
    text = (
        "domain Bool { values 0 < 1 }\n"
        "domain Level { values low < mid < high }\n"
        "exo Y : Level\n"
        "exo Z : Bool\n"
        "endo X : Bool = Y and Z\n"
    )
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert err.value.line == 5
    assert err.value.column == text.splitlines()[4].index("and") + 1


def test_empty_document_is_a_validation_error():
    with pytest.raises(ParseError) as err:
        parse_model("")
    assert "no variables" in err.value.message
    assert err.value.line == 1 and err.value.column == 1


def test_comments_and_blank_lines_are_ignored():
    model = parse_model(
        "# a comment\n"
        "domain Bool { values 0 < 1 }  # trailing\n"
        "\n"
        "exo U : Bool\n"
        "endo X : Bool = not U  # another\n"
    )
    assert sorted(model.variables) == ["U", "X"]


def test_syntax_error_carries_a_span():
    with pytest.raises(ParseError) as err:
        parse_model("domain Bool { values 0 < }\n")
    assert err.value.line == 1
    assert 1 <= err.value.column <= len("domain Bool { values 0 < }") + 1


def test_unknown_domain_reference():
    with pytest.raises(ParseError) as err:
        parse_model("exo U : Missing\n")
    assert "Missing" in err.value.message


def test_duplicate_declarations_rejected():
    with pytest.raises(ParseError):
        parse_model("domain B { values 0 < 1 }\ndomain B { values 0 < 1 }\n")
    with pytest.raises(ParseError):
        parse_model("domain B { values 0 < 1 }\nexo U : B\nexo U : B\n")


def test_keywords_cannot_name_variables():
    with pytest.raises(ParseError):
        parse_model("domain B { values 0 < 1 }\nexo table : B\n")


def test_table_parses_and_is_total():
    model = parse_model(
        "domain Bool { values 0 < 1 }\n"
        "exo A : Bool\nexo B : Bool\n"
        "endo X : Bool = table (A, B) { (0, 0) -> 0, (0, 1) -> 1, (1, 0) -> 1, (1, 1) -> 0 }\n"
    )
    equation = model.equations["X"]
    assert set(equation.parents) == {"A", "B"}


def test_partial_table_rejected():
    with pytest.raises(ParseError) as err:
        parse_model(
            "domain Bool { values 0 < 1 }\n"
            "exo A : Bool\n"
            "endo X : Bool = table (A) { (0) -> 1 }\n"
        )
    assert "partial" in err.value.message


def test_duplicate_table_row_rejected():
    with pytest.raises(ParseError):
        parse_model(
            "domain Bool { values 0 < 1 }\n"
            "exo A : Bool\n"
            "endo X : Bool = table (A) { (0) -> 1, (0) -> 0, (1) -> 0 }\n"
        )


def test_table_row_arity_checked():
    with pytest.raises(ParseError):
        parse_model(
            "domain Bool { values 0 < 1 }\n"
            "exo A : Bool\n"
            "endo X : Bool = table (A) { (0, 1) -> 1, (1) -> 0 }\n"
        )


def test_forward_references_are_allowed():
    model = parse_model(
        "domain B { values 0 < 1 }\n"
        "endo V1 : B = V2\n"
        "exo U : B\n"
        "endo V2 : B = U\n"
    )
    assert model.equations["V1"].parents == ("V2",)


def test_cycles_through_forward_references_are_spanned_diagnostics():
    with pytest.raises(ParseError) as err:
        parse_model("domain B { values 0 < 1 }\nendo V1 : B = V2\nendo V2 : B = V1\n")
    assert "cycle" in err.value.message
    assert err.value.line == 2 and err.value.column == 6


def test_two_literal_comparisons_are_uninferable():
    with pytest.raises(ParseError) as err:
        parse_model("domain B { values 0 < 1 }\nexo U : B\nendo X : B = 0 == 1\n")
    assert "infer" in err.value.message


def test_roundtrip_pizza(pizza):
    assert parse_model(serialize_model(pizza)) == pizza


def test_parse_document_keeps_source_and_spans(pizza_text, pizza):
    from causalforge import parse_document

    document = parse_document(pizza_text)
    assert document.text == pizza_text
    assert document.model == pizza
    lines = pizza_text.splitlines()
    for name, (line, column) in document.spans.items():
        assert 1 <= line <= len(lines)
        assert lines[line - 1][column - 1 :].startswith(name)
    assert set(document.spans) == {"Bool", "U1", "U2", "V1", "V2"}


def test_serialize_is_deterministic(pizza):
    assert serialize_model(pizza) == serialize_model(pizza)


def test_table_rows_serialize_in_domain_order():
    level = "domain Level { values low < mid < high }\n"
    shuffled = (
        level
        + "exo A : Level\n"
        + "endo X : Level = table (A) { (high) -> low, (low) -> mid, (mid) -> high }\n"
    )
    model = parse_model(shuffled)
    text = serialize_model(model)
    assert "(low) -> mid, (mid) -> high, (high) -> low" in text
    assert parse_model(text) == model


def test_operator_precedence_roundtrip():
    text = (
        "domain Bool { values 0 < 1 }\n"
        "exo A : Bool\nexo B : Bool\nexo C : Bool\n"
        "endo X : Bool = A or B and not C\n"
        "endo Y : Bool = (A or B) and C\n"
        "endo Z : Bool = if A == B then C else not C\n"
        "endo W : Bool = min(A, max(B, C))\n"
    )
    model = parse_model(text)
    assert parse_model(serialize_model(model)) == model


def test_gradual_expressions_roundtrip():
    text = (
        "domain Level { values low < mid < high }\n"
        "exo A : Level\nexo B : Level\n"
        "endo X : Level = if A <= B then min(A, B) else high\n"
    )
    model = parse_model(text)
    assert parse_model(serialize_model(model)) == model


def test_serializing_a_table_built_in_memory():
    level = Variable("A", "exogenous", BOOL)
    x = Variable("X", "endogenous", BOOL)
    body = table_from_mapping(["A"], {("1",): "0", ("0",): "1"})
    model = CausalModel([BOOL], [level], [x], [StructuralEquation("X", body)])
    assert parse_model(serialize_model(model)) == model


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**63 - 1),
    profile=st.sampled_from(["binary", "chain(3)", "chain(4)", "poset(4)"]),
    equations=st.sampled_from(["expression", "table"]),
)
def test_roundtrip_on_fuzzed_models(seed, profile, equations):
    params = GeneratorParams(
        seed=seed, max_vars=7, domain_profile=profile, equation_profile=equations
    )
    model = generate_model(params)
    text = serialize_model(model)
    assert parse_model(text) == model
    assert serialize_model(parse_model(text)) == text
