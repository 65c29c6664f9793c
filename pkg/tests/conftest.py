import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from opengbpa.datasets import table1_models
from opengbpa.evidence import MassFunction, World, make_frame

LABELS = "abcd"


def as_label_dict(m):
    return {frozenset(k): v for k, v in m.as_label_dict().items()}


def random_mass(rng, n, world=World.OPEN, max_focal=None, empty=None):
    """Random mass function on an ``n``-label frame with Dirichlet weights."""
    frame = make_frame(LABELS[:n], world)
    subsets = list(range(1, 1 << n)) if world is World.CLOSED else list(range(1 << n))
    k = int(rng.integers(1, (max_focal or len(subsets)) + 1))
    chosen = rng.choice(subsets, size=min(k, len(subsets)), replace=False)
    weights = rng.dirichlet(np.ones(len(chosen)))
    masses = dict(zip(map(int, chosen), weights))
    if empty is not None:
        masses = {b: v * (1 - empty) for b, v in masses.items() if b}
        masses[0] = masses.get(0, 0.0) + empty
    return MassFunction(frame, masses, normalize=True)


@st.composite
def mass_functions(draw, n=None, world=World.OPEN, empty_mass=None):
    n = draw(st.integers(1, 4)) if n is None else n
    frame = make_frame(LABELS[:n], world)
    first = 1 if world is World.CLOSED else 0
    bits = draw(st.lists(st.integers(first, (1 << n) - 1), min_size=1, max_size=6, unique=True))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=len(bits), max_size=len(bits)))
    total = sum(weights)
    masses = {b: w / total for b, w in zip(bits, weights)}
    if empty_mass == 0:
        masses.pop(0, None)
        if not masses:
            masses = {frame.full: 1.0}
    return MassFunction(frame, masses, normalize=True)


@st.composite
def mass_pairs(draw, world=World.OPEN):
    n = draw(st.integers(1, 4))
    return draw(mass_functions(n=n, world=world)), draw(mass_functions(n=n, world=world))


@pytest.fixture
def table1():
    return table1_models()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
