"""Shared fixtures plus the acceptance-criteria terminal summary."""

import pytest

from cantorsq import make_params

CRITERIA_TITLES = {
    1: "level-set sums and differences",
    2: "four squares fill [0, 4]",
    3: "bands inside three-square images",
    4: "subdivision closure",
    5: "thin-regime gap",
    6: "certificate sweep",
    7: "inequality audit",
    8: "certificate determinism",
}

_ACCEPTANCE_MARK = "test_acceptance.py::test_criterion_"


@pytest.fixture(scope="session")
def params3():
    return make_params(3)


@pytest.fixture(scope="session")
def params4():
    return make_params(4)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for reports in terminalreporter.stats.values():
        for rep in reports:
            nodeid = getattr(rep, "nodeid", "") or ""
            if _ACCEPTANCE_MARK not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            tail = name[len("test_criterion_"):]
            try:
                num = int(tail.split("_")[0])
            except ValueError:
                continue
            passed_call = (getattr(rep, "when", "") == "call"
                           and getattr(rep, "passed", False))
            failed = getattr(rep, "failed", False)
            seen_pass, seen_fail = outcomes.get(num, (False, False))
            outcomes[num] = (seen_pass or passed_call, seen_fail or failed)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(outcomes):
        seen_pass, seen_fail = outcomes[num]
        verdict = "PASS" if seen_pass and not seen_fail else "FAIL"
        title = CRITERIA_TITLES.get(num, "unknown")
        terminalreporter.write_line(
            "criterion %d (%s): %s" % (num, title, verdict)
        )
    freq = getattr(config, "_case_tag_freq", None)
    if freq:
        pairs = ", ".join("%s %d" % (tag, n) for tag, n in freq.items())
        terminalreporter.write_line("criterion 6 case tags: " + pairs)
