import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sapc import _kernels, corpus
from sapc.reduction import HomologyEngine
from sapc.smith import smith_normal_form, verify_smith

import oracles

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(small_matrices)
def test_smith_matches_determinantal_divisors(M):
    form = smith_normal_form(M, check=True)
    assert [d for d in form.diag if d] == oracles.determinantal_divisors(M)


@given(small_matrices)
def test_smith_rank_matches_rational_rank(M):
    assert smith_normal_form(M).rank == oracles.rank_q(M)


def test_smith_boundary_of_sphere():
    d = oracles.simplices_by_dim([(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])
    d1 = oracles.boundary_dense(d[0], d[1])
    d2 = oracles.boundary_dense(d[1], d[2])
    assert smith_normal_form(d1, check=True).diag == (1, 1, 1, 0)
    assert smith_normal_form(d2, check=True).diag == (1, 1, 1, 0)


def test_smith_detects_corrupted_transform():
    M = [[2, 4], [6, 8]]
    form = smith_normal_form(M)
    bad = type(form)(form.diag, form.U, form.U_inv, [[1, 1], [0, 1]], form.V_inv, form.shape)
    with pytest.raises(AssertionError):
        verify_smith(M, bad)


def test_large_entries_stay_exact():
    M = [[2**70, 3], [5, 7 * 2**65]]
    form = smith_normal_form(M, check=True)
    assert form.diag[0] == 1
    assert form.diag[1] == abs(M[0][0] * M[1][1] - 15)


# -- numba and pure kernels agree --------------------------------------------------------


def _homology_under(flag, monkeypatch, name):
    monkeypatch.setenv("SAPC_NUMBA", flag)
    C = corpus.load_unoriented(name).chain_complex
    engine = HomologyEngine(C)
    return [engine.homology(k).as_dict() for k in C.degrees]


@pytest.mark.parametrize("name", ["s2", "rp2_6", "t2_7", "cp2_9"])
def test_kernel_paths_agree(name, monkeypatch):
    fast = _homology_under("1", monkeypatch, name)
    slow = _homology_under("0", monkeypatch, name)
    assert fast == slow


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=5), st.sampled_from([2, 3, 5]))
def test_rank_mod_p_paths_agree(M, p):
    import os

    old = os.environ.get("SAPC_NUMBA")
    try:
        os.environ["SAPC_NUMBA"] = "0"
        slow = _kernels.rank_mod_p(np.array(M), p)
        os.environ["SAPC_NUMBA"] = "1"
        fast = _kernels.rank_mod_p(np.array(M), p)
    finally:
        if old is None:
            os.environ.pop("SAPC_NUMBA", None)
        else:
            os.environ["SAPC_NUMBA"] = old
    assert slow == fast == oracles.rank_mod_p(M, p)


def test_numba_switch(monkeypatch):
    monkeypatch.setenv("SAPC_NUMBA", "0")
    assert not _kernels.numba_enabled()
    monkeypatch.setenv("SAPC_NUMBA", "1")
    assert _kernels.numba_enabled() == _kernels.HAVE_NUMBA
