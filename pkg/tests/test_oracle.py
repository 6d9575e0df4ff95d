import numpy as np
import pytest

from conftest import word
from gca.language import member
from gca.oracle import (Found, NotFoundUpTo, TorusEnsemble, oracle_asymptotic_kernel_word, oracle_decide,
                        oracle_domain_words, oracle_eventual_period, oracle_image_words, oracle_member,
                        torus_dynamics)
from gca.shifts import Pattern, torus_member


def test_ensemble_counts(full_z2, two_point, ledrappier):
    assert len(TorusEnsemble(full_z2, 3).tori((3,))) == 8
    assert len(TorusEnsemble(two_point, 4).tori((4,))) == 2
    # Ledrappier tori of shape (2, 2): only the all-zero one
    assert len(TorusEnsemble(ledrappier, 2).tori((2, 2))) == 1
    assert all(torus_member(c, ledrappier) for c in TorusEnsemble(ledrappier, 3))


def test_oracle_member(ledrappier, two_point, z2):
    found = oracle_member(Pattern(z2, ((0, 0), (1, 0)), (1, 1)), ledrappier, 4)
    assert isinstance(found, Found) and torus_member(found.certificate, ledrappier)
    miss = oracle_member(word(z2, [0, 1]), two_point, 5)
    assert isinstance(miss, NotFoundUpTo) and not miss and miss.K == 5


def test_oracle_member_agrees_with_decider(ledrappier, z2):
    cells = ((0, 0), (0, 1), (1, 0), (1, 1))
    for vals in np.ndindex(2, 2, 2, 2):
        p = Pattern(z2, cells, vals)
        seen, decided = oracle_member(p, ledrappier, 4), member(p, ledrappier)
        # the oracle only sees periods up to K: a hit proves membership, a miss proves nothing
        if seen:
            assert decided
        if not decided:
            assert not seen


def test_words(examples):
    e1 = examples["E1"]
    assert oracle_domain_words(e1.domain, 2, 4) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert oracle_image_words(examples["E6"], 3, 4) == [(0, 0, 0)]
    assert oracle_image_words(examples["E5"], 1, 3) == [(0,), (2,)]


def test_dynamics_on_tori(examples):
    dyn = torus_dynamics(examples["E3"], (4,))
    assert dyn["injective"] and dyn["period"] == 4 and dyn["preperiod"] == 0
    dyn = torus_dynamics(examples["E5"], (3,))
    assert dyn["nilpotent"] and dyn["preperiod"] == 2
    assert oracle_decide(examples["E1"], "injective-on-tori", 4) is False
    assert oracle_decide(examples["E4"], "surjective-on-tori", 4) is True
    assert oracle_decide(examples["E6"], "nilpotent-on-tori", 4) is True
    with pytest.raises(ValueError):
        oracle_decide(examples["E1"], "mixing", 3)


def test_eventual_period_and_kernel_words(examples):
    assert oracle_eventual_period(examples["E4"], 5) == (0, 1)
    assert oracle_eventual_period(examples["E3"], 4) == (0, 12)
    assert oracle_asymptotic_kernel_word(examples["E4"], 4) is None
    w = oracle_asymptotic_kernel_word(examples["E6"], 3)
    assert w is not None
