import re

_ACCEPTANCE_RE = re.compile(r"test_acceptance\.py::(test_a\d+[^ ]*)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if getattr(rep, "when", "call") != "call" and status == "passed":
                continue
            m = _ACCEPTANCE_RE.search(nodeid)
            if m:
                lines.append((m.group(1), label))
    if not lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, label in sorted(set(lines)):
        terminalreporter.write_line(f"{label}  {name}")
