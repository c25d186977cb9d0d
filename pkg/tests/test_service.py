import json
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from causalforge.service import create_app


@pytest.fixture(scope="module")
def client(request):
    pizza = request.getfixturevalue("pizza")
    app = create_app(pizza, "pizza")
    with TestClient(app) as c:
        yield c


def test_model_endpoint(client):
    first = client.get("/model")
    second = client.get("/model")
    assert first.status_code == 200
    assert first.json() == second.json()
    body = first.json()
    assert body["name"] == "pizza"
    assert body["binary"] is True
    assert {v["name"] for v in body["variables"]} == {"U1", "U2", "V1", "V2"}
    assert ["U1", "V1"] in body["influences"]
    assert body["domains"][0]["values"] == ["0", "1"]


def test_evaluate_accepts_numeric_json_values(client):
    response = client.post("/evaluate", json={"input": {"U1": 1, "U2": 0}})
    assert response.status_code == 200
    assert response.json()["values"] == {"U1": "1", "U2": "0", "V1": "1", "V2": "1"}


def test_evaluate_with_interventions(client):
    response = client.post(
        "/evaluate",
        json={
            "input": {"U1": 1, "U2": 1},
            "interventions": [{"variable": "V1", "value": 1}],
        },
    )
    assert response.status_code == 200
    assert response.json()["values"]["V2"] == "1"


def test_evaluate_undeclared_variable_is_422(client):
    response = client.post("/evaluate", json={"input": {"U1": 1, "U2": 0, "W": 1}})
    assert response.status_code == 422
    body = response.json()
    assert set(body) == {"code", "message"}


def test_evaluate_out_of_domain_value_is_422(client):
    response = client.post("/evaluate", json={"input": {"U1": 5, "U2": 0}})
    assert response.status_code == 422


def test_missing_input_object_is_400(client):
    response = client.post("/evaluate", json={"interventions": []})
    assert response.status_code == 400
    assert response.json()["code"] == "malformed-request"


def test_unparseable_body_is_400(client):
    response = client.post(
        "/evaluate", content=b"{nope", headers={"content-type": "application/json"}
    )
    assert response.status_code == 400


def test_explain_matches_the_golden_explanation(client):
    response = client.post(
        "/explain", json={"input": {"U1": 1, "U2": 0}, "policy": "all"}
    )
    assert response.status_code == 200
    document = response.json()
    assert document["attacks"] == [["U2", "V1"]]
    assert document["supports"] == [["U1", "V1"], ["V1", "V2"]]
    assert document["property_report"]["all_passed"] is True
    accepted = {a["name"] for a in document["arguments"] if a.get("accepted")}
    assert accepted == {"U1", "V1", "V2"}


def test_explain_with_policy_and_interventions(client):
    response = client.post(
        "/explain",
        json={
            "input": {"U1": 1, "U2": 1},
            "interventions": [{"variable": "V1", "value": "1"}],
            "policy": "involved",
        },
    )
    assert response.status_code == 200
    document = response.json()
    assert document["interventions"] == [{"variable": "V1", "value": "1"}]
    assert document["supports"] == [["V1", "V2"]]


def test_explain_rejects_bad_policy(client):
    response = client.post(
        "/explain", json={"input": {"U1": 1, "U2": 0}, "policy": "upside-down"}
    )
    assert response.status_code == 422


def test_enumerate_inputs(client):
    response = client.get("/inputs/enumerate", params={"cap": 16})
    assert response.status_code == 200
    body = response.json()
    assert body["count"] == 4
    assert {"U1": "1", "U2": "0"} in body["inputs"]


def test_enumerate_respects_the_cap(client):
    response = client.get("/inputs/enumerate", params={"cap": 2})
    assert response.status_code == 422
    assert response.json()["code"] == "too-many-inputs"


def test_concurrent_requests_stay_independent(client):
    inputs = [{"U1": a, "U2": b} for a in (0, 1) for b in (0, 1)] * 4

    def explain(payload):
        return client.post("/explain", json={"input": payload}).json()

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(explain, inputs))
    for payload, document in zip(inputs, results):
        expected_attacks = [["U2", "V1"]] if (payload["U1"], payload["U2"]) in ((1, 0), (1, 1)) else []
        assert document["attacks"] == expected_attacks
        assert document["input"] == {k: str(v) for k, v in payload.items()}


def test_documents_are_deterministic(client):
    payload = {"input": {"U1": 1, "U2": 0}}
    first = client.post("/explain", json=payload)
    second = client.post("/explain", json=payload)
    assert first.content == second.content
    # key order in the wire format is lexicographic
    body = json.loads(first.content)
    assert list(body) == sorted(body)
