"""Shared pytest plumbing: collect acceptance verdict lines and print them
in the terminal summary, where they survive output capture."""

_verdict_lines = []


def record_verdict(line):
    _verdict_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _verdict_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _verdict_lines:
        terminalreporter.write_line(line)
