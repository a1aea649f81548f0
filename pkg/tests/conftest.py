import numpy as np
import pytest

from crossnet.ingest import PositionMatrix, quarter_label


def make_positions(values, start="1983Q1", entities=None):
    values = np.asarray(values, dtype=float)
    if entities is None:
        entities = [f"E{i:02d}" for i in range(values.shape[0])]
    first = int(start[:4]) * 4 + int(start[5]) - 1
    periods = [quarter_label(first + t) for t in range(values.shape[1])]
    return PositionMatrix(tuple(entities), tuple(periods), values)


def panel_csv(claims, liabilities, entities=None, start="1983Q1"):
    claims = np.asarray(claims, dtype=float)
    liabilities = np.asarray(liabilities, dtype=float)
    if entities is None:
        entities = [f"E{i:02d}" for i in range(claims.shape[0])]
    first = int(start[:4]) * 4 + int(start[5]) - 1
    lines = ["entity,period,claims,liabilities"]
    for i, e in enumerate(entities):
        for t in range(claims.shape[1]):
            lines.append(f"{e},{quarter_label(first + t)},{float(claims[i, t])!r},{float(liabilities[i, t])!r}")
    return "\n".join(lines) + "\n"


def change_point_positions(rng, N=24, n=168, change=84, synced=None, noise=0.3):
    """I.i.d. noise; from ``change`` on, ``synced`` entities follow a common factor."""
    synced = N // 2 if synced is None else synced
    x = rng.normal(size=(N, n))
    factor = rng.normal(size=n)
    x[:synced, change:] = factor[change:] + noise * rng.normal(size=(synced, n - change))
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------------- acceptance report

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _CRITERIA.append((status, marker.args[0]))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): release acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for status, name in _CRITERIA:
        terminalreporter.write_line(f"[{status}] {name}")
