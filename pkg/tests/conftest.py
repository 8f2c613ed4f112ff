from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(bound: int = 12, nonzero: bool = False):
    """Small-height rationals; exact arithmetic stays fast."""
    s = st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))
    return s.filter(lambda v: v != 0) if nonzero else s


def generic(bound: int = 12):
    """Rationals that are not integers, away from the usual forbidden sets."""
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(2, bound)).filter(lambda v: v.denominator > 1)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
