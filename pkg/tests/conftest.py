import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE: dict[int, str] = {}


def to_complex(x) -> complex:
    """Evaluate an exact cyclotomic number under zeta_{p^N} -> e^{2 pi i / p^N}."""
    P = x.p**x.N
    return sum(float(Fraction(c, x.den)) * cmath.exp(2j * math.pi * i / P) for i, c in enumerate(x.nums))


@pytest.fixture
def cx():
    return to_complex


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
