import numpy as np
import pytest

from gca.ca import zoo
from gca.groups import preset
from gca.shifts import GroupShiftPresentation, Pattern

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def word(group, vals, start=0):
    return Pattern.word(group, list(vals), start=start)


def ledrappier_shift():
    z2 = preset("Z2")
    cells = ((0, 0), (0, 1), (1, 0))
    bad = [v for v in np.ndindex(2, 2, 2) if sum(v) % 2]
    return GroupShiftPresentation(z2, 2, forbidden=[Pattern(z2, cells, v) for v in bad], name="LEDRAPPIER")


@pytest.fixture(scope="session")
def z2():
    return preset("Z2")


@pytest.fixture(scope="session")
def z4():
    return preset("Z4")


@pytest.fixture(scope="session")
def s3():
    return preset("S3")


@pytest.fixture(scope="session")
def examples():
    return zoo()


@pytest.fixture(scope="session")
def full_z2(z2):
    return GroupShiftPresentation.full(z2, 1, name="FULLZ2")


@pytest.fixture(scope="session")
def two_point(z2):
    return GroupShiftPresentation(z2, 1, forbidden=[word(z2, [0, 1]), word(z2, [1, 0])], name="TWOPOINT")


@pytest.fixture(scope="session")
def ledrappier():
    return ledrappier_shift()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
