import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import word
from gca.errors import DomainTooSmall, NotPowerAlphabet, ShapeMismatch
from gca.groups import power_group, preset
from gca.shifts import (GroupShiftPresentation, Pattern, PeriodicConfiguration, groupness_check, hat_lift,
                        normalize, pattern_combine, pattern_translate, torus_member, unlift)

LINE3 = ((0,), (1,), (2,))


def test_normalize_extends_every_placement(z2):
    x = GroupShiftPresentation(z2, 1, forbidden=[word(z2, [0, 1])])
    out = normalize(x, LINE3)
    assert sorted(p.values for p in out.forbidden) == [(0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 1)]
    assert all(p.cells == LINE3 for p in out.forbidden)


def test_normalize_identity_cases(z2, two_point):
    assert normalize(two_point, ((0,), (1,))).forbidden == two_point.forbidden
    once = normalize(two_point, LINE3)
    assert normalize(once, LINE3).forbidden == once.forbidden


def test_normalize_rejects_small_domain(z2):
    x = GroupShiftPresentation(z2, 1, forbidden=[word(z2, [0, 1, 1])])
    with pytest.raises(DomainTooSmall):
        normalize(x, ((0,), (1,)))


def test_normalize_preserves_tori(z2, two_point):
    xs = [two_point, GroupShiftPresentation(z2, 1, forbidden=[word(z2, [1, 1])])]
    for x in xs:
        y = normalize(x, ((0,), (1,), (2,), (3,)))
        for k in range(1, 7):
            for vals in itertools.product(range(2), repeat=k):
                c = PeriodicConfiguration(z2, (k,), vals)
                assert torus_member(c, x) == torus_member(c, y)


def test_pattern_products(z2, s3):
    assert pattern_combine("product", word(z2, [0, 1]), word(z2, [1, 1])).values == (1, 0)
    ident = word(z2, [0, 0])
    assert pattern_combine("inverse", ident) == ident
    p = word(s3, [1, 3, 5])
    prod = pattern_combine("product", p, pattern_combine("inverse", p))
    assert prod.is_identity() and prod.cells == p.cells
    with pytest.raises(ShapeMismatch):
        pattern_combine("product", word(z2, [0, 1]), word(z2, [0]))


def test_translation(z2):
    p = word(z2, [0, 1])
    assert pattern_translate(p, (1,)).cells == ((-1,), (0,))
    assert pattern_translate(p, (0,)) == p
    assert pattern_translate(pattern_translate(p, (3,)), (-3,)) == p


def test_hat_lift_examples(z2):
    g2 = power_group(z2, 2)
    single = Pattern(g2, ((),), (g2.compose((1, 0)),))
    lifted = hat_lift(single)
    assert lifted.cells == ((1,), (2,)) and lifted.values == (1, 0)
    g1 = power_group(z2, 1)
    p = Pattern(g1, ((0,), (3,)), (1, 0))
    assert hat_lift(p).values == (1, 0)
    q = Pattern(g2, ((0,), (1,)), (g2.compose((0, 1)), g2.compose((1, 0))))
    lq = hat_lift(q)
    assert lq.cells == ((1, 0), (1, 1), (2, 0), (2, 1))
    assert lq.mapping()[(1, 0)] == 0 and lq.mapping()[(2, 0)] == 1
    assert lq.mapping()[(1, 1)] == 1 and lq.mapping()[(2, 1)] == 0
    with pytest.raises(NotPowerAlphabet):
        hat_lift(word(z2, [1]))


@settings(max_examples=80, deadline=None)
@given(n=st.integers(1, 3), vals=st.lists(st.integers(0, 7), min_size=1, max_size=4))
def test_lift_unlift_round_trip(n, vals):
    z2 = preset("Z2")
    g = power_group(z2, n)
    p = Pattern(g, tuple((i,) for i in range(len(vals))), tuple(v % g.order for v in vals))
    assert unlift(hat_lift(p), g) == p


def test_torus_member_examples(z2, ledrappier):
    fw = GroupShiftPresentation(z2, 1, forbidden=[word(z2, [0, 1])])
    assert torus_member(PeriodicConfiguration(z2, (3,), (0, 0, 0)), fw)
    assert not torus_member(PeriodicConfiguration(z2, (2,), (0, 1)), fw)
    assert torus_member(PeriodicConfiguration(z2, (2, 2), (0, 0, 0, 0)), ledrappier)
    assert not torus_member(PeriodicConfiguration(z2, (2, 2), (1, 0, 0, 0)), ledrappier)


def test_groupness(z2, two_point, full_z2):
    assert groupness_check(full_z2, 2)[0]
    ok, witness = groupness_check(GroupShiftPresentation(z2, 1, forbidden=[word(z2, [0, 1])]), 1)
    assert not ok
    a, b = witness
    assert pattern_combine("product", a, b).values == (0, 1)
    assert groupness_check(two_point, 2)[0]


def test_window_presentation_round_trip(z2, two_point):
    sizes, allowed = two_point.window
    again = GroupShiftPresentation.from_window(z2, sizes, allowed)
    assert sorted(p.values for p in again.forbidden) == [(0, 1), (1, 0)]


def test_periodic_configuration_checks(z2):
    with pytest.raises(ValueError):
        PeriodicConfiguration(z2, (2,), (0, 1, 1))
    c = PeriodicConfiguration.from_array(z2, np.array([[0, 1], [1, 1]]))
    assert c.periods == (2, 2) and c.at((3, -1)) == 1
