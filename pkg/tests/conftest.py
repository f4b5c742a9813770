"""Prints the acceptance scoreboard after the run, one line per criterion."""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        import test_acceptance
    except ImportError:
        return
    results = getattr(test_acceptance, "RESULTS", {})
    if not results:
        return
    terminalreporter.write_line("")
    for num in sorted(results):
        name, status = results[num]
        terminalreporter.write_line(f"ACCEPTANCE {num} {name}: {status}")
