import math
import re

import numpy as np
import pytest

from rvfunnel.controller import FunnelViolation
from rvfunnel.scenario import load_scenario, loads, bundled_scenario_path
from rvfunnel.sim import simulate


@pytest.fixture(scope="session")
def reentry_text():
    return bundled_scenario_path().read_text()


@pytest.fixture(scope="session")
def reentry():
    return load_scenario(bundled_scenario_path())


@pytest.fixture(scope="session")
def reentry_run(reentry):
    """(record, violation or None) for the bundled scenario over its full horizon."""
    try:
        return simulate(reentry), None
    except FunnelViolation as exc:
        return exc.record, exc


def edit_scenario(text: str, section: str, **values) -> str:
    """Replace or append ``key = value`` lines inside one TOML section."""
    lines = text.splitlines()
    start = next(i for i, ln in enumerate(lines) if ln.strip() == f"[{section}]")
    end = next((i for i in range(start + 1, len(lines)) if lines[i].startswith("[")),
               len(lines))
    for key, val in values.items():
        pat = re.compile(rf"^{re.escape(key)}\s*=")
        hit = [i for i in range(start + 1, end) if pat.match(lines[i])]
        new = f"{key} = {val}"
        if hit:
            lines[hit[0]] = new
        else:
            lines.insert(end, new)
            end += 1
    return "\n".join(lines) + "\n"


HOLD_SCENARIO = """
[vehicle]
alpha = 0.0
cz0 = 0.0
cm0 = 0.0

[disturbance]
amplitudes = [0.0, 0.0, 0.0, 0.0]

[reference]
speed = 1475.35
waypoints = [[0.0, 0.0], [30000.0, 0.0]]

[funnel]
triggers = []
channel0 = [{ rho0 = 50.0, rho_inf = 5.0, rate = 0.5 }]
scale = [1.0, 1.0, 1.0]

[initial]
z_h = 0.0
psi_V = 0.0
beta = 0.0
omega_y = 0.0

[sim]
horizon = 10.0
"""


@pytest.fixture
def hold_scenario():
    """Trimmed vehicle at rest on a level reference: an exact equilibrium."""
    return loads(HOLD_SCENARIO, name="hold")


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def isclose(a, b, tol):
    return math.isclose(a, b, rel_tol=tol, abs_tol=0.0)


def column_scaled_deviation(a: np.ndarray, b: np.ndarray) -> float:
    scale = np.max(np.abs(b), axis=0)
    return float(np.max(np.max(np.abs(a - b), axis=0) / scale))


def shrink_funnels(text: str, factor: float) -> str:
    """Divide every rho0/rho_inf in the [funnel] phase tables by `factor`."""
    def repl(m):
        return f"{m.group(1)} = {float(m.group(2)) / factor!r}"
    return re.sub(r"\b(rho0|rho_inf)\s*=\s*([0-9.eE+-]+)", repl, text)


ACCEPTANCE_LINES: list = []


def report(number: int, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
