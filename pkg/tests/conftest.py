from pathlib import Path

import pytest

from causalforge import Input, parse_model

PIZZA_PATH = Path(__file__).resolve().parent.parent / "models" / "pizza.cm"

# Hand-frozen truth table for the pizza model: (U1, U2) -> (V1, V2).
# This is the oracle the engine is checked against, kept independent of it.
PIZZA_TABLE = {
    ("1", "1"): ("0", "0"),
    ("1", "0"): ("1", "1"),
    ("0", "1"): ("0", "0"),
    ("0", "0"): ("0", "0"),
}


@pytest.fixture(scope="session")
def pizza_text() -> str:
    return PIZZA_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def pizza(pizza_text):
    return parse_model(pizza_text)


def pizza_input(u1: str, u2: str) -> Input:
    return Input({"U1": u1, "U2": u2})
