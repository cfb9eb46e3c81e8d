import pytest

CRITERIA = {
    1: "template counts, types and volumes for n <= 6",
    2: "q = 0 template is the identity for n <= 6",
    3: "engine, oracle and M^k counts agree",
    4: "labeled isomorphism engine <-> oracle",
    5: "Euler characteristic and closedness",
    6: "homotopy f_0 identity and f_1 image",
    7: "Kuhn suite for p <= 7",
    8: "determinism and JSON round-trip",
}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    tally = {}
    for reports in terminalreporter.stats.values():
        for r in reports:
            crit = dict(getattr(r, "user_properties", ())).get("criterion")
            if crit is None or r.when not in ("setup", "call"):
                continue
            t = tally.setdefault(crit, {"passed": 0, "failed": 0, "skipped": 0})
            if r.failed:
                t["failed"] += 1
            elif r.skipped:
                t["skipped"] += 1
            elif r.when == "call":
                t["passed"] += 1
    if not tally:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(CRITERIA):
        t = tally.get(crit)
        if t is None:
            terminalreporter.write_line(f"criterion {crit}: NOT RUN  {CRITERIA[crit]}")
            continue
        status = "PASS" if t["failed"] == 0 and t["passed"] else "FAIL"
        extra = f", {t['skipped']} skipped" if t["skipped"] else ""
        terminalreporter.write_line(
            f"criterion {crit}: {status}  {CRITERIA[crit]} ({t['passed']} passed, {t['failed']} failed{extra})"
        )
