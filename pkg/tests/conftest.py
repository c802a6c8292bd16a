import numpy as np
import pytest

from pinonlocal import HermitianOperator


def random_hermitian(rng, n=4, dims=(2, 2)):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianOperator.from_array((x + x.conj().T) / 2, *dims)


def random_density(rng, n=4, rank=None, dims=(2, 2)):
    rank = rank or n
    x = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = x @ x.conj().T
    return HermitianOperator.from_array(rho / np.trace(rho).real, *dims)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props["title"]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, status, title in sorted(lines):
            terminalreporter.write_line(f"criterion {num}: {status}  {title}")
