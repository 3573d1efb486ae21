import pytest

from splitfold.core import BaseGraph, FreeSplitting, GraphMorphism, parse_path
from splitfold.fixture import load
from splitfold.words import Basis

ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[1])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[name] = (ok, detail)
        print(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
    return _record


@pytest.fixture(scope="session")
def rose2():
    return BaseGraph.rose(Basis.standard(2))


@pytest.fixture(scope="session")
def maps_fx():
    return load("maps.sfd")


@pytest.fixture(scope="session")
def fib():
    return load("fibonacci.sfd").map("fib")


@pytest.fixture(scope="session")
def paths_fx():
    return load("small_paths.sfd")


@pytest.fixture(scope="session")
def new_example():
    return load("new_example.sfd").path("alpha")


def rose_self_map(images: dict) -> GraphMorphism:
    """Self-map of the rose on a, b, ... given as letter -> space-separated edge path."""
    n = len(images)
    R = BaseGraph.rose(Basis.standard(n))
    return GraphMorphism.build(R, R, {"v": "v"}, {k: parse_path(v) for k, v in images.items()})
