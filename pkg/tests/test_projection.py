import itertools

import numpy as np
import pytest

from conftest import word
from gca.errors import DimensionMismatch
from gca.groups import direct_product, power_group
from gca.homs import GroupShiftHom
from gca.language import allowed_patterns, member
from gca.oned import from_words, sft_of
from gca.oracle import oracle_image_words
from gca.projection import (TrackSplit, cut_shift, graph_shift, image_shift, kernel_shift, preimage_shift,
                            project_general, project_slice, project_track, radius_of_sync, same_shift,
                            slice_halting_holds)
from gca.shifts import GroupShiftPresentation, hat_lift, Pattern


@pytest.fixture(scope="module")
def klein(z2):
    k = direct_product(z2, z2)
    return k, TrackSplit.of_product(k)


@pytest.fixture(scope="module")
def diagonal(klein):
    k, _ = klein
    return from_words(k, np.array([[k.compose((0, 0))], [k.compose((1, 1))]]))


def test_slices_of_1d_shifts(full_z2, two_point):
    assert list(project_slice(full_z2, 2).members) == [0, 1, 2, 3]
    assert list(project_slice(two_point, 2).members) == [0, 3]


def test_ledrappier_slice_is_full(ledrappier, z2):
    out = project_slice(ledrappier, 1)
    assert same_shift(out, GroupShiftPresentation.full(out.group, 1))
    assert slice_halting_holds(project_slice(ledrappier, 2))


def test_slice_language_matches_lift(ledrappier):
    out = project_slice(ledrappier, 2)
    g = out.group
    for n in (1, 2):
        for vals in itertools.product(range(g.order), repeat=n):
            p = word(g, vals)
            assert bool(member(p, out)) == bool(member(hat_lift(p), ledrappier))


def test_track_projection_examples(klein, diagonal, examples, z2, z4):
    k, split = klein
    assert same_shift(project_track(diagonal, split), GroupShiftPresentation.full(z2, 1))
    gx, gs = graph_shift(examples["E5"])
    sub = project_track(gx, gs.swap())
    assert sorted(sub.window[1][:, 0].tolist()) == [0, 2]
    gx, gs = graph_shift(examples["E1"])
    assert same_shift(project_track(gx, gs.swap()), GroupShiftPresentation.full(z2, 1))


def test_cuts(klein, diagonal, examples, z2):
    k, split = klein
    ident = GroupShiftPresentation.identity_shift(z2, 1)
    assert same_shift(cut_shift(GroupShiftPresentation.full(k, 1), split), GroupShiftPresentation.full(z2, 1))
    assert same_shift(cut_shift(diagonal, split), ident)
    gx, gs = graph_shift(examples["E3"])
    assert same_shift(cut_shift(gx, gs), ident)


def test_synchronization_radius(klein, diagonal, examples):
    k, split = klein
    assert radius_of_sync(GroupShiftPresentation.full(k, 1), split).r == 1
    sync = radius_of_sync(diagonal, split)
    assert (sync.m, sync.r) == (1, 1) and list(sync.U.members) == [0]
    gx, gs = graph_shift(examples["E1"])
    sync = radius_of_sync(gx, gs.swap())
    # regression constants for the XOR graph shift
    assert (sync.m, sync.r, sync.n) == (2, 1, 5)


def test_general_projection(ledrappier, two_point, z2):
    full2 = GroupShiftPresentation.full(z2, 2)
    assert same_shift(project_general(full2, 1, ((0,),)), GroupShiftPresentation.full(power_group(z2, 1), 1))
    for axis in (0, 1):
        col = project_general(ledrappier, 1, ((0,),), keep_axes=(axis,))
        assert same_shift(col, GroupShiftPresentation.full(col.group, 1))
    assert list(project_general(two_point, 0, ((0,), (1,))).members) == [0, 3]
    with pytest.raises(DimensionMismatch):
        project_general(two_point, 1, ((0,),))


def test_preimages_and_kernels(examples, z2, z4):
    ident = GroupShiftPresentation.identity_shift(z2, 1)
    assert same_shift(preimage_shift(examples["E4"], ident), ident)
    ker = kernel_shift(examples["E1"])
    assert sorted(map(tuple, sft_of(ker).language(2))) == [(0, 0), (1, 1)]
    ker = kernel_shift(examples["E5"])
    assert sorted(sft_of(ker).language(1)[:, 0].tolist()) == [0, 2]


def test_preimage_of_a_subshift(examples, z2):
    # XOR image is constant exactly on constant and alternating configurations
    f = examples["E1"]
    pre = preimage_shift(f, examples["E2"].domain)
    for vals in itertools.product(range(2), repeat=4):
        diffs = {(vals[i] + vals[i + 1]) % 2 for i in range(3)}
        assert bool(member(word(z2, vals), pre)) == (len(diffs) == 1)


def test_images(examples, z2, z4):
    assert same_shift(image_shift(examples["E1"]), GroupShiftPresentation.full(z2, 1))
    assert same_shift(image_shift(examples["E6"]), GroupShiftPresentation.identity_shift(z2, 1))
    assert sorted(image_shift(examples["E5"]).window[1][:, 0].tolist()) == [0, 2]


@pytest.mark.parametrize("name", ["E1", "E2", "E3", "E4", "E5", "E6", "E7"])
def test_image_routes_agree(examples, name):
    f = examples[name]
    auto = image_shift(f)
    gen = image_shift(f, route="generic")
    assert same_shift(auto, gen)
    # the image language agrees with the oracle on short words
    for n in (1, 2):
        words = oracle_image_words(f, n, 6)
        got = {tuple(r) for r in sft_of(auto).language(n).tolist()}
        assert set(words) <= got


def test_non_ca_hom_image(z2, z4):
    # Z4 -> Z2 reduction mod 2 as a shift homomorphism with a Z2 target
    full4 = GroupShiftPresentation.full(z4, 1)
    h = GroupShiftHom.from_function(full4, z2, [(0,), (1,)], lambda v: (v[0] + v[1]) % 2)
    img = image_shift(h)
    assert img.group is z2 and same_shift(img, GroupShiftPresentation.full(z2, 1))
    ker = kernel_shift(h)
    assert len(allowed_patterns(ker, ((0,), (1,)))) == 8
