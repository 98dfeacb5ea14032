import numpy as np
import pytest

from lgatom.dynamics import CompositeBasis
from lgatom.internal_ladder import InternalLadder
from lgatom.trap_fock import build_basis


def make_basis(n_max=4, levels=2, m_base=29):
    gaps = tuple(100.0 + 10.0 * k for k in range(levels - 1))
    return CompositeBasis(InternalLadder(m_base=m_base, level_count=levels, transition_frequencies=gaps), build_basis(n_max))


@pytest.fixture
def basis():
    return make_basis()


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    key = (marker.args[0], item.name)
    ACCEPTANCE[key] = (marker.args[1], "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), (text, status) in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"[{status}] criterion {num:>2} {name}: {text}")
