"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import re


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call":
                continue
            m = re.search(r"test_c(\d+)_(\w+)", rep.nodeid)
            if not m:
                continue
            props = dict(rep.user_properties)
            rows.append((int(m.group(1)), m.group(2), outcome == "passed", props.get("measured", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, measured in sorted(rows):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d} {name}: {measured}")
