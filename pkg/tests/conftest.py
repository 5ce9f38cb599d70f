import os

from hypothesis import settings

# Random seeds occasionally produce F-polynomials with tens of thousands of
# terms; cap polynomial size so such draws fail fast and get redrawn.
os.environ.setdefault("GCA_MAX_TERMS", "20000")

# fixed example streams keep the run time of the random-seed tests reproducible
settings.register_profile("repo", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repo")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
