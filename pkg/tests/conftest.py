import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

import support  # noqa: E402

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "exact"))


def pytest_terminal_summary(terminalreporter):
    if not support.SCOREBOARD:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(support.SCOREBOARD):
        terminalreporter.write_line(support.verdict_line(number))
