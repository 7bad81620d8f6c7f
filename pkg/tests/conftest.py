from pathlib import Path

import pytest

from wardrop import Game
from wardrop.formats import load_game

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def pigou() -> Game:
    return load_game(FIXTURES / "pigou.json")


@pytest.fixture(scope="session")
def mono() -> Game:
    return load_game(FIXTURES / "mono.json")


@pytest.fixture(scope="session")
def twotype() -> Game:
    return load_game(FIXTURES / "twotype.json")
