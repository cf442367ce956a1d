import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sapc import forms
from sapc.errors import FormNotSymmetric
from sapc.shadows import random_unimodular

import oracles


@st.composite
def symmetric_forms(draw, max_rank=5):
    r = draw(st.integers(1, max_rank))
    entries = draw(st.lists(st.integers(-4, 4), min_size=r * r, max_size=r * r))
    A = np.array(entries, dtype=np.int64).reshape(r, r)
    return (A + A.T).tolist()


@given(symmetric_forms())
def test_inertia_matches_eigenvalues(G):
    inert = forms.inertia(G)
    ev = np.linalg.eigvalsh(np.array(G, dtype=float))
    assert inert.positive == int((ev > 1e-9).sum())
    assert inert.negative == int((ev < -1e-9).sum())
    assert inert.positive + inert.negative + inert.zero == len(G)


@given(symmetric_forms(), st.integers(0, 2**32 - 1))
def test_signature_invariant_under_unimodular_change(G, seed):
    P, Pinv = random_unimodular(len(G), np.random.default_rng(seed))
    assert (P.dot(Pinv) == np.eye(len(G), dtype=object)).all()
    H = forms.congruent_transform(G, [[int(x) for x in r] for r in P])
    assert forms.inertia(H) == forms.inertia(G)
    assert forms.determinant(H) == forms.determinant(G)


@given(symmetric_forms())
def test_negation_negates_signature(G):
    assert forms.signature_of_form([[-x for x in r] for r in G]) == -forms.signature_of_form(G)


@given(symmetric_forms(4))
def test_determinant_matches_oracle(G):
    assert forms.determinant(G) == oracles._det(G)


def test_zero_pivot_block():
    H = [[0, 1], [1, 0]]
    assert forms.inertia(H) == forms.Inertia(1, 1, 0)
    assert forms.is_hyperbolic(H)


def test_e8_is_even_unimodular_definite():
    E8 = [[0] * 8 for _ in range(8)]
    for i in range(8):
        E8[i][i] = 2
    for i, j in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]:
        E8[i][j] = E8[j][i] = -1
    assert forms.is_unimodular(E8) and forms.is_even(E8)
    assert forms.signature_of_form(E8) == 8
    assert not forms.is_hyperbolic(E8)


def test_odd_form_is_not_hyperbolic():
    assert not forms.is_hyperbolic([[1, 0], [0, -1]])
    assert forms.signature_of_form([[1, 0], [0, -1]]) == 0


def test_empty_form():
    assert forms.is_unimodular([])
    assert not forms.is_hyperbolic([])
    assert forms.signature_of_form([]) == 0


def test_asymmetric_rejected():
    with pytest.raises(FormNotSymmetric):
        forms.inertia([[1, 2], [3, 1]])
