import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gca.errors import NoIdentity, NoInverse, NonAssociative, NotHomomorphism, PowerTooLarge
from gca.groups import (PRESETS, direct_product, endomorphisms, make_subgroup, power_group, preset,
                        subgroup_closure, subgroup_image, trivial_group, verify_group)


def test_z2_table_is_abelian():
    g = verify_group([[0, 1], [1, 0]])
    assert g.order == 2 and g.is_abelian


def test_missing_inverse_is_reported():
    with pytest.raises(NoInverse) as exc:
        verify_group([[0, 1], [1, 1]])
    assert "1" in str(exc.value)


def test_missing_identity_and_associativity():
    with pytest.raises(NoIdentity):
        verify_group([[1, 1], [1, 1]])
    # a Latin square with identity 0 that is not associative
    quasi = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NonAssociative):
        verify_group(quasi)


def test_label_tables():
    g = verify_group([["e", "a"], ["a", "e"]])
    assert g.labels == ("e", "a") and g.identity == 0


def test_s3_non_abelian():
    s3 = preset("S3")
    assert s3.order == 6 and not s3.is_abelian


@pytest.mark.parametrize("name", PRESETS)
def test_presets_satisfy_group_axioms(name):
    g = preset(name)
    x = np.arange(g.order)
    t = g.mul_arrays(x[:, None], x[None, :])
    left = t[t[:, :, None], x[None, None, :]]
    right = t[x[:, None, None], t[None, :, :]]
    assert (left == right).all()
    assert (t[g.identity] == x).all() and (t[:, g.identity] == x).all()
    assert (t[x, g.inv] == g.identity).all()


def test_products():
    z2, s3 = preset("Z2"), preset("S3")
    k = direct_product(z2, z2)
    assert k.order == 4 and k.is_abelian
    assert all(k.mul(a, a) == k.identity for a in range(4))
    m = direct_product(z2, s3)
    assert m.order == 12 and not m.is_abelian
    assert direct_product(s3, trivial_group()).same_table(s3)


def test_product_projection_recovers_factor():
    z2, s3 = preset("Z2"), preset("S3")
    m = direct_product(z2, s3)
    x = np.arange(m.order)
    for a, b in itertools.product(range(m.order), repeat=2):
        assert m.project(m.mul(a, b), 1) == s3.mul(m.project(a, 1), m.project(b, 1))
    assert sorted({m.project(a, 1) for a in x}) == list(range(6))


def test_power_groups():
    z2 = preset("Z2")
    g = power_group(z2, 2)
    assert g.order == 4
    assert g.mul(g.compose((1, 0)), g.compose((1, 1))) == g.compose((0, 1))
    assert power_group(preset("Z3"), 3).order == 27
    with pytest.raises(PowerTooLarge):
        power_group(z2, 40, limit=2 ** 20)


def test_lazy_power_inverse():
    g = power_group(preset("Z4"), 12)
    a = g.compose([1, 2, 3] * 4)
    assert g.mul(a, g.inverse(a)) == g.identity


def test_subgroup_closure_examples():
    z4, s3 = preset("Z4"), preset("S3")
    assert list(subgroup_closure(z4, {2})) == [0, 2]
    assert list(subgroup_closure(s3, set())) == [s3.identity]
    transposition = s3.labels.index("s")
    assert len(subgroup_closure(s3, {transposition})) == 2


def test_subgroup_images():
    z2, z4 = preset("Z2"), preset("Z4")
    k = direct_product(z2, z2)
    diag = make_subgroup(k, [k.compose((0, 0)), k.compose((1, 1))])
    assert list(subgroup_image(diag, lambda a: k.project(a, 0), z2)) == [0, 1]
    assert list(subgroup_image(make_subgroup(z4, [0, 2]), lambda a: (2 * a) % 4, z4)) == [0]
    full = make_subgroup(k, range(4))
    assert list(subgroup_image(full, lambda a: k.project(a, 1), z2)) == [0, 1]


def test_subgroup_image_rejects_non_homomorphism():
    z4 = preset("Z4")
    with pytest.raises(NotHomomorphism):
        subgroup_image(make_subgroup(z4, range(4)), lambda a: 1 if a == 1 else 0, z4)


def test_endomorphisms_of_z4():
    maps = endomorphisms(preset("Z4"))
    assert sorted(tuple(m) for m in maps) == [(0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 0, 2), (0, 3, 2, 1)]


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(PRESETS), seed=st.sets(st.integers(0, 7), max_size=3))
def test_closure_idempotent_and_lagrange(name, seed):
    g = preset(name)
    seed = {a % g.order for a in seed}
    h = subgroup_closure(g, seed)
    assert subgroup_closure(g, set(h)) == h
    assert g.order % len(h) == 0
    for f in endomorphisms(g)[:6]:
        img = subgroup_image(h, lambda a, f=f: f[a], g)
        assert len(h) % len(img) == 0
