import numpy as np
import pytest

from netbell.quantum import DensityMatrix


def random_density_matrix(rng: np.random.Generator, dim: int = 4, rank: int | None = None) -> DensityMatrix:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20211017)


# Acceptance reporting: tests marked ``acceptance(n, "label")`` are grouped by
# criterion and summarised as one PASS/FAIL line each at the end of the run.
_acceptance: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, label): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    n, label = marker.args
    entry = _acceptance.setdefault(n, {"label": label, "passed": [], "failed": []})
    if report.failed:
        entry["failed"].append(item.name)
    elif report.when == "call" and report.passed:
        entry["passed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        e = _acceptance[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n} [{status}] {e['label']} ({len(e['passed'])} checks passed"
        line += f", failing: {', '.join(e['failed'])})" if e["failed"] else ")"
        terminalreporter.write_line(line)
