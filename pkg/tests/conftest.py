from fractions import Fraction

import pytest

from mumford import Mat2

P = 3

EX1 = [[[-5, 32], [-8, 35]], [[-13, 80], [-8, 43]]]
EX2 = [[[-79, 160], [-80, 161]], [[-319, 1600], [-80, 401]]]
EX3 = [[[121, -120], [40, -39]], [[121, -240], [20, -39]], [[401, -1600], [80, -319]]]
WHITTAKER_PAIRS = [(Fraction(0), Fraction(9)), (Fraction(1), Fraction(10)), (Fraction(2), Fraction(11))]


def mats(rows):
    return [Mat2.from_rows(m) for m in rows]


def from_fixed_points(a, b, ratio):
    """Matrix with attracting fixed point ``a``, repelling ``b`` and eigenvalue ratio ``ratio``."""
    M = Mat2(Fraction(a), Fraction(b), Fraction(1), Fraction(1))
    return (M * Mat2(Fraction(ratio), Fraction(0), Fraction(0), Fraction(1)) * M.inverse()).primitive()


@pytest.fixture(scope="session")
def ex1():
    return mats(EX1)


@pytest.fixture(scope="session")
def ex2():
    return mats(EX2)


@pytest.fixture(scope="session")
def ex3():
    return mats(EX3)


@pytest.fixture(scope="session")
def ex3_domain(ex3):
    from mumford import good_position

    return good_position(ex3, P).domain


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        verdict, title = results[n]
        terminalreporter.write_line("criterion %d: %s (%s)" % (n, verdict, title))
