import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20020115)


def random_tetrahedron(rng, min_volume=0.02, low=0.5, high=2.0):
    """Points whose six pairwise distances lie in [low, high], volume >= min_volume."""
    while True:
        pts = rng.uniform(-1.0, 1.0, size=(4, 3))
        d = [np.linalg.norm(pts[i] - pts[j]) for i in range(4) for j in range(i + 1, 4)]
        vol = abs(np.linalg.det(pts[1:] - pts[0])) / 6
        if low <= min(d) and max(d) <= high and vol >= min_volume:
            return pts


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
