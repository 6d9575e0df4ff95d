import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ledrappier_shift
from gca import _pykernels, kernels
from gca.groups import preset
from gca.language import torus_csp
from gca.oned import sft_of
from gca.shifts import GroupShiftPresentation

compiled = pytest.importorskip("gca._kernels")
LED = ledrappier_shift()


def test_backend_reported():
    assert kernels.backend() in ("cython", "python")


@settings(max_examples=60, deadline=None)
@given(a=st.integers(1, 6), b=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1))
def test_torus_scan_backends_agree(a, b, seed):
    arr = np.random.default_rng(seed).integers(0, 2, size=(a, b))
    fast = kernels.torus_scan(arr, LED.forbidden, impl=compiled)
    slow = kernels.torus_scan(arr, LED.forbidden, impl=_pykernels)
    assert fast == slow


@pytest.mark.parametrize("periods", [(3, 3), (4, 2), (5, 3)])
def test_csp_backends_agree(periods):
    csp, _ = torus_csp(LED, periods)
    fast = csp.solve("all", impl=compiled)
    slow = csp.solve("all", impl=_pykernels)
    assert sorted(map(tuple, np.asarray(fast).tolist())) == sorted(map(tuple, np.asarray(slow).tolist()))


@settings(max_examples=20, deadline=None)
@given(order=st.sampled_from(["Z2", "Z3", "Z4"]), length=st.integers(1, 6))
def test_path_words_backends_agree(order, length):
    g = sft_of(GroupShiftPresentation.full(preset(order), 1)).graph
    starts = np.arange(g.nstates)
    o1, w1 = kernels.path_words(g.ptr, g.sym, g.tgt, starts, length, impl=compiled)
    o2, w2 = kernels.path_words(g.ptr, g.sym, g.tgt, starts, length, impl=_pykernels)
    assert np.array_equal(np.asarray(o1), np.asarray(o2)) and np.array_equal(np.asarray(w1), np.asarray(w2))
    assert len(w1) == preset(order).order ** length
