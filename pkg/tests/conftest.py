import numpy as np
import pytest

from msmacof import SolverConfig, build_laplacian_pair, load_dataset, normalize, run
from msmacof.io import ekman_available


@pytest.fixture(scope="session")
def degruijter():
    data, _ = load_dataset("degruijter")
    return normalize(data)


@pytest.fixture(scope="session")
def degruijter_lap(degruijter):
    return build_laplacian_pair(degruijter)


@pytest.fixture(scope="session")
def degruijter_solution(degruijter, degruijter_lap):
    return run(degruijter, SolverConfig(p=3), lap=degruijter_lap)


@pytest.fixture(scope="session")
def degruijter_pca_solution(degruijter, degruijter_lap):
    return run(degruijter, SolverConfig(p=3, pca=True), lap=degruijter_lap)


requires_ekman = pytest.mark.skipif(not ekman_available(), reason="vendored Ekman file missing or checksum mismatch")


@pytest.fixture(scope="session")
def ekman():
    if not ekman_available():
        pytest.skip("vendored Ekman file missing or checksum mismatch")
    data, _ = load_dataset("ekman")
    return normalize(data)


@pytest.fixture(scope="session")
def ekman_lap(ekman):
    return build_laplacian_pair(ekman)


@pytest.fixture(scope="session")
def ekman_solution(ekman, ekman_lap):
    return run(ekman, SolverConfig(p=2), lap=ekman_lap)


@pytest.fixture(scope="session")
def ekman_pca_solution(ekman, ekman_lap):
    return run(ekman, SolverConfig(p=2, pca=True), lap=ekman_lap)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance-criterion line: ``criterion(tag, ok, detail)``."""

    def record(tag, ok, detail=""):
        _CRITERIA[tag] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_CRITERIA, key=lambda t: (int(t[1:].split(".")[0]), t)):
        ok, detail = _CRITERIA[tag]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {tag}  {detail}")
