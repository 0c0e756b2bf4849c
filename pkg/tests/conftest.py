from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from digitop.graph_core import DigitalSpace

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", deadline=None, max_examples=10)
settings.load_profile("default")

DEFAULT_SEED = 20240917


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED,
                     help="seed for the randomized trials (hypothesis has its own --hypothesis-seed)")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 9) -> DigitalSpace:
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    picks = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return DigitalSpace(n, [p for p, keep in zip(pairs, picks) if keep])


def random_graph(rng: random.Random, n: int, p: float) -> DigitalSpace:
    return DigitalSpace(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
