import sys


def pytest_terminal_summary(terminalreporter):
    # the acceptance module records one line per criterion as it runs
    for name, mod in list(sys.modules.items()):
        if name.split(".")[-1] == "test_acceptance" and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for n in sorted(mod.RESULTS):
                terminalreporter.write_line(mod.RESULTS[n])
            return
