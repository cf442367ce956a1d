import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from sapc import corpus
from sapc.chaincore import (
    ChainComplex,
    ChainMap,
    dual_complex,
    double_dual_evaluation,
    homology,
    is_quasi_iso,
    mapping_cone,
    tensor_complex,
)
from sapc.errors import BoundaryError, ShapeMismatch
from sapc.reduction import HomologyGroup
from sapc.simplicial import SimplicialComplex, SimplicialMap

import oracles


def betti(C, k):
    return C.homology(k).betti


def as_pairs(C, top):
    return [(C.homology(k).betti, list(C.homology(k).torsion)) for k in range(top + 1)]


# -- homology ----------------------------------------------------------------------


@pytest.mark.parametrize("name", corpus.NAMES)
def test_corpus_homology_matches_rank_oracle(name, docs):
    X = corpus.load_unoriented(name)
    assert as_pairs(X.chain_complex, X.dim) == oracles.homology_oracle(docs[name]["top_simplices"])


def test_sphere_top_homology():
    C = SimplicialComplex.from_top(4, [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]).chain_complex
    assert homology(C, 2) == HomologyGroup(2, 1)
    assert homology(C, 5).is_zero and homology(C, -3).is_zero


def test_zero_complex():
    C = ChainComplex({})
    assert all(homology(C, k).is_zero for k in range(-2, 3))


def test_rp2_torsion():
    X = corpus.load_unoriented("rp2_6")
    assert X.chain_complex.homology(1).as_dict() == {"betti": 0, "torsion": [2]}


def test_torsion_must_divide():
    with pytest.raises(ValueError):
        HomologyGroup(0, 0, (2, 3))


def test_boundary_squared_rejected():
    with pytest.raises(BoundaryError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]})


def test_shape_mismatch_rejected():
    with pytest.raises(ShapeMismatch):
        ChainComplex({0: 2, 1: 1}, {1: [[1, 1]]})


# -- cones ----------------------------------------------------------------------------


@pytest.mark.parametrize("name", corpus.NAMES)
def test_cone_of_identity_is_acyclic(name):
    C = corpus.load_unoriented(name).chain_complex
    assert mapping_cone(ChainMap.identity(C)).engine.is_acyclic()


def test_cone_of_zero_map_is_direct_sum():
    C = corpus.load_unoriented("t2_7").chain_complex
    cone = mapping_cone(ChainMap.zero(C, C))
    for k in range(0, 4):
        assert betti(cone, k) == betti(C, k) + betti(C, k - 1)


def test_cone_of_doubling_has_order_two():
    Z = ChainComplex({0: 1})
    cone = mapping_cone(ChainMap(Z, Z, {0: [[2]]}))
    assert cone.homology(0).as_dict() == {"betti": 0, "torsion": [2]}
    assert oracles.determinantal_divisors([[2]]) == [2]


def test_cone_rejects_shifted_map():
    Z = ChainComplex({0: 1})
    with pytest.raises(ShapeMismatch):
        mapping_cone(ChainMap(Z, ChainComplex({1: 1}), {0: [[1]]}, degree=1))


# -- quasi-isomorphisms ---------------------------------------------------------------


def test_identity_is_quasi_iso():
    C = corpus.load_unoriented("s2").chain_complex
    assert is_quasi_iso(ChainMap.identity(C))


def test_zero_map_is_not_quasi_iso():
    C = corpus.load_unoriented("s2").chain_complex
    assert not is_quasi_iso(ChainMap.zero(C, C))


def test_vertex_into_triangle_is_quasi_iso():
    tri = SimplicialComplex.simplex(2)
    pt = SimplicialComplex(1, [(0,)])
    inc = SimplicialMap(pt, tri, [1])
    assert is_quasi_iso(inc.chain_map())


# -- tensor products -------------------------------------------------------------------


def test_kunneth_sphere_square():
    C = corpus.load_unoriented("s2").chain_complex
    T = tensor_complex(C, C)
    assert [betti(T, k) for k in range(5)] == [1, 0, 2, 0, 1]


@pytest.mark.parametrize("a,b", [("s2", "t2_7"), ("t2_7", "t2_7"), ("s2", "s4")])
def test_kunneth_ranks(a, b):
    A = corpus.load_unoriented(a).chain_complex
    B = corpus.load_unoriented(b).chain_complex
    T = tensor_complex(A, B)
    for n in range(T.lo, T.hi + 1):
        want = sum(betti(A, p) * betti(B, n - p) for p in range(A.lo, A.hi + 1))
        assert betti(T, n) == want


def test_tensor_with_unit():
    C = corpus.load_unoriented("rp2_6").chain_complex
    T = tensor_complex(C, ChainComplex({0: 1}))
    assert as_pairs(T, 2) == as_pairs(C, 2)
    for k in (1, 2):
        assert (T.boundary(k) != C.boundary(k)).nnz == 0


def _random_simplicial(draw):
    nv = draw(st.integers(2, 6))
    tops = draw(
        st.lists(
            st.lists(st.integers(0, nv - 1), min_size=1, max_size=4, unique=True).map(lambda s: tuple(sorted(s))),
            min_size=1,
            max_size=6,
        )
    )
    used = sorted({v for t in tops for v in t})
    relabel = {v: i for i, v in enumerate(used)}
    tops = [tuple(relabel[v] for v in t) for t in tops]
    return tops, SimplicialComplex.from_top(len(used), tops)


@st.composite
def simplicial_complexes(draw):
    return _random_simplicial(draw)


@given(simplicial_complexes())
def test_random_homology_matches_oracle(data):
    tops, X = data
    assert as_pairs(X.chain_complex, X.dim) == oracles.homology_oracle(tops)


@given(simplicial_complexes(), simplicial_complexes())
def test_tensor_boundary_squares_to_zero(a, b):
    T = tensor_complex(a[1].chain_complex, b[1].chain_complex)
    for k in T.degrees:
        prod = T.boundary(k - 1) @ T.boundary(k) if T.rank(k - 2) else None
        assert prod is None or prod.count_nonzero() == 0


@given(simplicial_complexes(), simplicial_complexes())
def test_random_kunneth_over_q(a, b):
    A, B = a[1].chain_complex, b[1].chain_complex
    T = tensor_complex(A, B)
    for n in T.degrees:
        # ranks over ℚ: dense matrix rank of the assembled boundaries
        r_n = np.linalg.matrix_rank(T.boundary(n).toarray()) if T.rank(n - 1) and T.rank(n) else 0
        r_n1 = np.linalg.matrix_rank(T.boundary(n + 1).toarray()) if T.rank(n + 1) and T.rank(n) else 0
        assert T.rank(n) - r_n - r_n1 == sum(betti(A, p) * betti(B, n - p) for p in A.degrees)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_random_three_term_complex(r0, r1, r2, seed):
    # ∂₁∂₂ = 0 by construction: ∂₂ lands in the kernel of ∂₁ = K·Pᵀ
    rng = np.random.default_rng(seed)
    P = rng.integers(-2, 3, size=(r1, 1))
    d1 = rng.integers(-2, 3, size=(r0, 1)) @ P.T
    null = np.zeros((r1, r2), dtype=np.int64)
    if r1 >= 2:
        v = np.zeros(r1, dtype=np.int64)
        v[0], v[1] = P[1, 0], -P[0, 0]
        null = np.outer(v, rng.integers(-2, 3, size=r2))
    C = ChainComplex({0: r0, 1: r1, 2: r2}, {1: d1, 2: null})
    D = tensor_complex(C, C)
    for k in D.degrees:
        if D.rank(k - 2):
            assert (D.boundary(k - 1) @ D.boundary(k)).count_nonzero() == 0


# -- duals ----------------------------------------------------------------------------------


def test_dual_of_point():
    D = dual_complex(ChainComplex({0: 1}), 0)
    assert D.ranks == {0: 1}


def test_dual_of_sphere():
    C = corpus.load_unoriented("s2").chain_complex
    D = dual_complex(C, 2)
    assert [betti(D, k) for k in range(3)] == [1, 0, 1]


@pytest.mark.parametrize("name,n", [("s2", 2), ("rp2_6", 2), ("t2_7", 2), ("s4", 4)])
def test_universal_coefficients(name, n):
    C = corpus.load_unoriented(name).chain_complex
    D = dual_complex(C, n)
    for k in range(0, n + 1):
        H = D.homology(k)
        assert H.betti == C.homology(n - k).betti
        assert H.torsion == C.homology(n - k - 1).torsion


@pytest.mark.parametrize("name", ["s2", "rp2_6", "d2_hemisphere"])
def test_double_dual_quasi_iso(name):
    C = corpus.load_unoriented(name).chain_complex
    assert is_quasi_iso(double_dual_evaluation(C, 2))


def test_chain_map_sign_check():
    C = ChainComplex({0: 1, 1: 1}, {1: [[1]]})
    with pytest.raises(BoundaryError):
        ChainMap(C, C, {0: [[1]], 1: [[-1]]})
    f = ChainMap(C, C, {0: sp.identity(1, dtype=np.int64), 1: sp.identity(1, dtype=np.int64)})
    assert f.compose(f).component(1).toarray().tolist() == [[1]]
