import pytest

from resqueeze import LOSSLESS, BathTemperatures, ResonatorParams


@pytest.fixture
def paper_resonator():
    """f0 = 5 GHz, Q_u = 2e4, Q_f = 100."""
    return ResonatorParams(f0=5e9, q_unloaded=2e4, q_feedline=100.0)


@pytest.fixture
def paper_baths():
    return BathTemperatures(t_feedline=0.01, t_damping=10.0)


@pytest.fixture
def lossless_resonator():
    return ResonatorParams(f0=5e9, q_unloaded=LOSSLESS, q_feedline=100.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
