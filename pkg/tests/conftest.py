from collections import defaultdict

import pytest

from morse_scs.ladders import LadderKind, LadderSpec
from morse_scs.model import MorseParams

_OUTCOMES: dict[str, list[bool]] = defaultdict(list)
_ORDER: list[str] = []


@pytest.fixture(scope="session")
def hcl():
    return MorseParams.from_preset("hcl")


@pytest.fixture(scope="session")
def cs2():
    return MorseParams.from_preset("cs2")


@pytest.fixture(scope="session")
def osc(hcl):
    return LadderSpec(LadderKind.OSCILLATOR, hcl)


@pytest.fixture(scope="session")
def ene(hcl):
    return LadderSpec(LadderKind.ENERGY, hcl)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if name not in _OUTCOMES:
            _ORDER.append(name)
        _OUTCOMES[name].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _ORDER:
        return
    terminalreporter.section("acceptance criteria")
    for name in _ORDER:
        res = _OUTCOMES[name]
        status = "PASS" if all(res) else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({sum(res)}/{len(res)} checks)")
