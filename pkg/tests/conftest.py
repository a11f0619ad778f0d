"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", ""):
                continue
            if rep.when != "call" and outcome != "error":
                continue
            props = dict(getattr(rep, "user_properties", []))
            label = props.get("criterion", rep.nodeid.split("::")[-1])
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((rep.nodeid, f"[{status}] {label}: {props.get('detail', '')}".rstrip(": ")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, text in sorted(lines):
        terminalreporter.write_line(text)
