from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hhverify.game import Board, Strategy

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@lru_cache(maxsize=None)
def figure(name: str) -> Board:
    return Board.from_rows(json.loads((FIXTURES / "figures.json").read_text())[name])


def strategy(name: str) -> Strategy:
    return Strategy.load(FIXTURES / "strategies" / f"{name}.json")


@lru_cache(maxsize=1)
def table2_reports():
    from hhverify.table2 import verify_table2

    return tuple(verify_table2(run_oracle=True))


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
