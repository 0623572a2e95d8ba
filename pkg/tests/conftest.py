from pathlib import Path

import pytest

from multispread.config import bundled_config_path, bundled_network
from multispread.model import ModelBuilder

GOLDEN = Path(__file__).parent / "golden"

EPIDEMIC_WEIGHTS = {
    ("s.n.u", "i.n.u"): 0.4,
    ("i.n.u", "r.n.u"): 0.1,
    ("s.a.u", "i.a.u"): 0.2,
    ("i.a.u", "r.a.u"): 0.3,
    ("s.a.v", "i.a.v"): 0.05,
    ("i.a.v", "r.a.v"): 0.7,
    ("s.n.u", "s.a.u"): 0.05,
    ("i.n.u", "i.a.u"): 0.2,
    ("s.n.v", "s.a.v"): 1.0,
    ("s.a.u", "s.a.v"): 0.03,
    ("i.a.u", "i.a.v"): 0.1,
}


def epidemic_builder():
    return (
        ModelBuilder()
        .add_process("ill", ["s", "i", "r"])
        .add_process("aware", ["n", "a"])
        .add_process("vacc", ["u", "v"])
    )


def epidemic_model(background=0.005, policy="linear"):
    model = epidemic_builder().compile(background_weight=background, adjacency_policy=policy)
    for (src, dst), w in EPIDEMIC_WEIGHTS.items():
        model.set_transition(src, dst, w)
    return model


@pytest.fixture(scope="session")
def lesmis():
    return bundled_network("lesmis")


@pytest.fixture(scope="session")
def epidemic_config_path():
    return bundled_config_path()


# -- acceptance summary -------------------------------------------------------

_acceptance: dict[str, list[tuple[str, bool]]] = {}


@pytest.fixture
def criterion(request):
    """Record pass/fail of an acceptance criterion for the terminal summary."""
    marker = request.node.get_closest_marker("criterion")
    label = marker.args[0] if marker else request.node.name
    yield label
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _acceptance.setdefault(label, []).append((request.node.name, passed))


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance):
        results = _acceptance[label]
        ok = all(p for _, p in results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({sum(p for _, p in results)}/{len(results)} checks)")
