from math import comb

import numpy as np
import pytest

from gca.errors import ConfigNotInShift, NotOneDimensional
from gca.groups import preset
from gca.render import gray_levels, orbit_rows, render_orbit, render_text
from gca.shifts import PeriodicConfiguration


@pytest.fixture()
def seed(z2):
    return PeriodicConfiguration(z2, (16,), (1,) + (0,) * 15)


def test_xor_orbit_is_pascal_mod_2(examples, seed):
    rows = orbit_rows(examples["E1"], seed, 16)
    want = np.array([[comb(t, (-i) % 16) % 2 for i in range(16)] for t in range(16)])
    assert np.array_equal(rows, want)


def test_identity_and_zero_orbits(examples, seed):
    rows = orbit_rows(examples["E4"], seed, 5)
    assert (rows == rows[0]).all()
    rows = orbit_rows(examples["E6"], seed, 5)
    assert (rows[1:] == 0).all() and rows[0, 0] == 1


def test_text_and_pgm(examples, seed, z2):
    text = render_orbit(examples["E1"], seed, 4)
    assert text.splitlines()[0] == "#" + "." * 15
    pgm = render_orbit(examples["E1"], seed, 4, fmt="pgm").split("\n")
    assert pgm[:3] == ["P2", "16 4", "255"]
    assert pgm[3].split()[:2] == ["0", "255"]
    with pytest.raises(ValueError):
        render_orbit(examples["E1"], seed, 4, fmt="gif")


def test_identity_is_white():
    for name in ("Z2", "Z4", "S3"):
        g = preset(name)
        levels = gray_levels(g)
        assert levels[g.identity] == 255 and len(set(levels.tolist())) == g.order
    s3 = preset("S3")
    assert render_text(np.array([[s3.identity]]), s3) == ".\n"


def test_orbit_errors(examples, ledrappier, z2):
    bad = PeriodicConfiguration(z2, (2,), (0, 1))
    with pytest.raises(ConfigNotInShift):
        orbit_rows(examples["E2"], bad, 3)
    from gca.homs import GroupShiftHom
    f = GroupShiftHom.from_function(ledrappier, z2, [(0, 0)], lambda v: v[0])
    with pytest.raises(NotOneDimensional):
        orbit_rows(f, PeriodicConfiguration(z2, (1, 1), (0,)), 2)
