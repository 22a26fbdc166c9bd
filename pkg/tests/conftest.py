import itertools

import numpy as np
import pytest

from rowqubo import AddressTrace, build_qubo, compute_toggle_sets, from_toggle_sets

TABLE1_LINES = ["10001", "00011", "00110", "01101", "01111",
                "01101", "11000", "11001", "10101"]
TABLE1_SETS = [(1, 6), (3, 8), (2, 6, 8), (1, 3, 4, 5), (2, 3, 6, 7)]


@pytest.fixture
def table1_trace():
    return AddressTrace.from_strings(TABLE1_LINES)


@pytest.fixture
def table1_instance(table1_trace):
    return from_toggle_sets(compute_toggle_sets(table1_trace), 3)


@pytest.fixture
def table1_qubo(table1_instance):
    return build_qubo(table1_instance)


def direct_hamiltonian(inst, A, B, C, x, y):
    """H_A + H_B + H_C straight from the set formulation, no matrix involved.

    ``x`` indexes sets, ``y`` maps element -> bit.
    """
    h_a = A * (inst.k - sum(x)) ** 2
    h_b = B * sum((1 - y[v]) * x[j] for j, s in enumerate(inst.sets) for v in s)
    h_c = C * sum(y[v] for v in inst.ground_set)
    return h_a + h_b + h_c


def random_trace(rng, max_width, max_len, min_width=1):
    width = int(rng.integers(min_width, max_width + 1))
    length = int(rng.integers(1, max_len + 1))
    bits = rng.integers(0, 2, size=(length, width))
    return AddressTrace(width, bits)


def all_assignments(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64).reshape(-1, n)


# one summary line per acceptance criterion -----------------------------------

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "_criterion", None)
    if marker is not None:
        _criteria[marker[0]] = (marker[1], "PASS" if report.passed else "FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m is not None:
        outcome.get_result()._criterion = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
