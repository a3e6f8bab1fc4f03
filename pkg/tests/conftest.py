from collections import defaultdict

import pytest

CRITERIA = {
    1: "kernel vs oracle equivalence",
    2: "Wronskian identities",
    3: "mu = 1 closed form",
    4: "linear decay rates",
    5: "multiplier bound audits",
    6: "small-data Picard contraction",
    7: "step and grid convergence",
    8: "exponent landscape",
    9: "inequality audits",
}

_results: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)


@pytest.fixture
def record():
    """``record(criterion, label, ok, detail)`` logs one sub-check of a criterion."""

    def _record(criterion: int, label: str, ok: bool, detail: str = "") -> bool:
        _results[criterion].append((label, bool(ok), detail))
        return bool(ok)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, title in CRITERIA.items():
        rows = _results.get(k)
        if not rows:
            tr.write_line(f"criterion {k} ({title}): NOT RUN")
            continue
        verdict = "PASS" if all(ok for _, ok, _ in rows) else "FAIL"
        tr.write_line(f"criterion {k} ({title}): {verdict}")
        for label, ok, detail in rows:
            tr.write_line(f"    [{'ok' if ok else 'FAIL'}] {label}: {detail}")
