import itertools

import numpy as np
import pytest

from conftest import word
from gca.ca import (analyze, apply_cyclic, column_words, entropy_1d, goe_entropy_check, jointly_periodic_sample,
                    limit_set, spacetime_shift, trace_shift, transient_length)
from gca.crosscheck import check_certificates, oracle_agreement
from gca.errors import NotOneDimensional
from gca.homs import GroupShiftHom
from gca.oned import sft_of
from gca.projection import same_shift
from gca.shifts import GroupShiftPresentation, PeriodicConfiguration, torus_member

# name -> (injective, surjective, nilpotent, eventually periodic, periodic, sensitivity, pre-injective)
EXPECTED = {
    "E1": (False, True, False, False, False, "sensitive", True),
    "E2": (False, False, True, True, False, "equicontinuous", True),
    "E3": (True, True, False, False, False, "sensitive", True),
    "E4": (True, True, False, True, True, "equicontinuous", True),
    "E5": (False, False, True, True, False, "equicontinuous", False),
    "E6": (False, False, True, True, False, "equicontinuous", False),
    "E7": (False, True, False, False, False, "sensitive", True),
}
PROPS = ("injective", "surjective", "nilpotent", "eventually_periodic", "periodic", "sensitivity_class",
         "pre_injective")
TRANSIENT = {"E1": 0, "E2": 1, "E3": 0, "E4": 0, "E5": 2, "E6": 1, "E7": 0}


@pytest.fixture(scope="module")
def reports(examples):
    return {k: {r.property: r for r in analyze(f)} for k, f in examples.items()}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_verdict_table(reports, name):
    got = tuple(reports[name][p].verdict for p in PROPS)
    assert got == EXPECTED[name]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_certificates_check_out(examples, reports, name):
    f = examples[name]
    for prop, ok in check_certificates(f, list(reports[name].values())):
        assert ok, prop


def test_injectivity_certificates_lie_in_kernel(examples, reports):
    for name, reps in reports.items():
        cert = reps["injective"].certificate
        if isinstance(cert, PeriodicConfiguration):
            f = examples[name]
            assert torus_member(cert, f.domain)
            out = f.apply_rows(np.tile(np.array(cert.values), 3)[None, :])[0]
            assert (out == f.group.identity).all()


def test_identity_is_visibly_not_transitive(reports):
    assert reports["E4"]["non_transitive"].verdict is True
    assert reports["E1"]["non_mixing"].verdict == "no_witness_within_budget"


def test_oracle_agreement_on_zoo(examples, reports):
    for name, f in examples.items():
        agree = oracle_agreement(f, list(reports[name].values()), K=6)
        assert not agree.disagreements, (name, agree.disagreements)


@pytest.mark.parametrize("name", sorted(TRANSIENT))
def test_transient_and_limit_set(examples, name):
    f = examples[name]
    assert transient_length(f) == TRANSIENT[name]
    proj = limit_set(f)
    assert same_shift(proj, limit_set(f, route="images"))
    full = sft_of(f.domain).language(2)
    lim = sft_of(proj).language(2)
    if EXPECTED[name][1]:
        assert len(lim) == len(full)
    else:
        assert lim.tolist() == [[0, 0]]


def test_spacetime_shift(examples, z2):
    f = examples["E1"]
    st = spacetime_shift(f)
    assert st.dim == 2 and len(st.forbidden) == 4
    # a (space, time) torus lies in the orbit shift iff each row maps to the next
    for vals in itertools.product(range(2), repeat=6):
        arr = np.array(vals).reshape(3, 2)
        c = PeriodicConfiguration.from_array(z2, arr)
        rows = arr.T
        follows = all((apply_cyclic(f, rows[t][None, :])[0] == rows[(t + 1) % 2]).all() for t in range(2))
        assert torus_member(c, st) == follows


def test_traces(examples):
    constant = column_words(examples["E4"], 3)
    assert constant.tolist() == [[0, 0, 0], [1, 1, 1]]
    assert len(sft_of(trace_shift(examples["E4"])).language(2)) == 2
    assert len(sft_of(trace_shift(examples["E1"])).language(2)) == 4
    assert len(sft_of(trace_shift(examples["E6"])).language(2)) == 1


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_entropy_addition(examples, name):
    out = goe_entropy_check(examples[name])
    assert out["addition_holds"] and out["moore_holds"]
    assert abs(out["h_domain"] - out["h_image"] - out["h_kernel"]) < 1e-8


def test_full_shift_entropy(z2, z4, two_point):
    assert abs(entropy_1d(GroupShiftPresentation.full(z2, 1)).value - np.log(2)) < 1e-9
    assert abs(entropy_1d(GroupShiftPresentation.full(z4, 1)).value - np.log(4)) < 1e-9
    assert entropy_1d(two_point).value == 0.0


def test_jointly_periodic_samples(examples, z2):
    p = word(z2, [0, 1])
    c = jointly_periodic_sample(examples["E4"], p)
    assert c.periods == (2, 1)
    assert jointly_periodic_sample(examples["E3"], p).periods == (2, 2)
    c = jointly_periodic_sample(examples["E1"], p)
    a, b = c.periods
    arr = np.array(c.values).reshape(a, b)
    f = examples["E1"]
    for t in range(b):
        nxt = f.apply_rows(np.concatenate([arr[:, t], arr[:1, t]])[None, :])[0]
        assert (nxt == arr[:, (t + 1) % b]).all()
    assert arr[0, 0] == 0 and arr[1, 0] == 1


def test_two_dimensional_automata_are_rejected(ledrappier):
    f = GroupShiftHom.from_function(ledrappier, ledrappier.group, [(0, 0)], lambda v: v[0])
    with pytest.raises(NotOneDimensional):
        limit_set(f)
    with pytest.raises(NotOneDimensional):
        goe_entropy_check(f)


def test_power_recheck_with_off_centre_neighborhoods(z2):
    from gca.ca import _same_power
    full = GroupShiftPresentation.full(z2, 1)
    right = GroupShiftHom.from_function(full, z2, [(1,)], lambda v: 0)
    left = GroupShiftHom.from_function(full, z2, [(-1,)], lambda v: v[0])
    assert _same_power(right, 2, 1) and not _same_power(right, 1, 0)
    assert not _same_power(left, 2, 1) and _same_power(left, 0, 0)
