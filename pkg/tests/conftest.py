import mpmath
import pytest

from zetacrit.mpsf import PrecisionContext, to_mpc


def oracle_zero(n: int = 1, dps: int = 60):
    """n-th zeta zero from mpmath, rounded at dps digits."""
    with mpmath.workdps(dps):
        return to_mpc(str(mpmath.zetazero(n)))


@pytest.fixture(scope="session")
def zero1():
    return oracle_zero(1)


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(bits=256, rel_tol=1e-30)


def rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else abs(a - b)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
