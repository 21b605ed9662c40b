import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = "test_acceptance.py::"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if _ACCEPTANCE not in getattr(rep, "nodeid", "") or rep.when != "call" and outcome != "error":
                continue
            props = dict(rep.user_properties)
            label = props.get("criterion", rep.nodeid.split("::")[-1])
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((label, f"{status}  {label}  {props.get('detail', '')}".rstrip()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, text in sorted(lines):
            terminalreporter.write_line(text)
