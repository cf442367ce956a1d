import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from sapc import corpus
from sapc.chaincore import ChainComplex
from sapc.equivariant import (
    InvolutiveComplex,
    NormMap,
    TensorChain,
    WResolution,
    check_steenrod_relation,
    diagonal_of_simplex,
    higher_diagonal,
    steenrod_defect,
    swap_matrices,
    symmetric_construction,
    tensor_square,
    z2_homotopy_window,
)
from sapc.errors import BoundaryError
from sapc.simplicial import SimplicialComplex, load_complex


def _matrix_relation_defect(X, s):
    """∂Δ_s − (−1)^s Δ_s∂ − (1 + (−1)^s T)Δ_{s−1}, assembled from whole matrices."""
    C = X.chain_complex
    sq = tensor_square(C)
    T = swap_matrices(C, sq)
    Ds = higher_diagonal(X, s)
    Dp = higher_diagonal(X, s - 1) if s else None
    worst = 0
    for k in range(X.dim + 1):
        lhs = sq.boundary(k + s) @ Ds.component(k) if sq.rank(k + s - 1) else sp.csc_matrix((0, C.rank(k)))
        if C.rank(k - 1) and sq.rank(k + s - 1):
            lhs = lhs - (-1) ** s * (Ds.component(k - 1) @ C.boundary(k))
        if Dp is not None and sq.rank(k + s - 1):
            prev = Dp.component(k)
            lhs = lhs - (prev + (-1) ** s * (T[k + s - 1] @ prev))
        if lhs.shape[0]:
            worst = max(worst, abs(lhs).max() if lhs.nnz else 0)
    return worst


def test_lowest_alexander_whitney():
    assert diagonal_of_simplex((0, 1), 0) == {((0,), (0, 1)): 1, ((0, 1), (1,)): 1}


def test_top_diagonal_is_square():
    for n in range(4):
        sigma = tuple(range(n + 1))
        d = diagonal_of_simplex(sigma, n)
        assert list(d) == [(sigma, sigma)] and abs(d[(sigma, sigma)]) == 1


@pytest.mark.parametrize("s", [1, 2])
def test_relation_on_simplex_by_matrices(s):
    assert _matrix_relation_defect(SimplicialComplex.simplex(3), s) == 0


@pytest.mark.parametrize("name", ["s2", "t2_7", "rp2_6", "d2_hemisphere"])
def test_relation_by_matrices_on_corpus(name):
    X = corpus.load_unoriented(name)
    for s in range(4):
        assert _matrix_relation_defect(X, s) == 0


@pytest.mark.parametrize("name", corpus.NAMES)
def test_relation_and_locality_every_simplex(name):
    assert check_steenrod_relation(corpus.load_unoriented(name), 3) == []


@given(st.lists(st.integers(0, 30), min_size=1, max_size=6, unique=True), st.integers(0, 3))
def test_relation_on_random_simplices(verts, s):
    sigma = tuple(sorted(verts))
    assert steenrod_defect(sigma, s) == {}
    for a, b in diagonal_of_simplex(sigma, s):
        assert set(a) | set(b) <= set(sigma)


def test_point_structure():
    M = load_complex({"name": "pt", "vertices": 1, "top_simplices": [[0]], "boundary_marked": False})
    phi = symmetric_construction(M, 2)
    assert list(phi.component(0).terms()) == [(0, 0, 0, 1)]
    assert phi.component(1).is_zero() and phi.component(2).is_zero()


@pytest.mark.parametrize("name", ["s2", "t2_7", "s4", "cp2_9"])
def test_structure_relations_closed(name):
    M = corpus.load(name)
    assert symmetric_construction(M, 2).check() == []


def test_structure_relative_to_boundary():
    M = corpus.load("d4")
    phi = symmetric_construction(M, 2)
    assert phi.check() != []
    B = M.boundary
    masks = {k: np.array([s in B for s in M.base.simplices(k)]) for k in range(5)}
    assert phi.check(relative_to=masks) == []


def test_symmetrized_phi0_is_classical_diagonal():
    M = corpus.load("s2")
    phi0 = symmetric_construction(M, 0).component(0)
    terms = {}
    for sigma, e in zip(M.base.simplices(2), M.signs):
        for i in range(3):
            key = (sigma[: i + 1], sigma[i:])
            terms[key] = terms.get(key, 0) + int(e)
    X = M.base
    ours = {}
    for p, i, j, c in phi0.terms():
        ours[(X.simplices(p)[i], X.simplices(2 - p)[j])] = c
    assert ours == {k: v for k, v in terms.items() if v}


# -- tensor chains and involutions ---------------------------------------------------------


@given(st.integers(0, 2**32 - 1))
def test_swap_is_an_involution(seed):
    X = corpus.load_unoriented("s2")
    C = X.chain_complex
    rng = np.random.default_rng(seed)
    vec = rng.integers(-3, 4, size=tensor_square(C).rank(2))
    x = TensorChain.from_vector(C, C, 2, vec)
    assert x.swap().swap() == x
    assert x.boundary().boundary().is_zero()


def test_swap_matrices_square_to_identity():
    C = corpus.load_unoriented("t2_7").chain_complex
    D = InvolutiveComplex.tensor_square(C)
    D.check()
    for k, t in D.involution.items():
        assert (t @ t - sp.identity(t.shape[0], dtype=np.int64)).count_nonzero() == 0


def test_broken_involution_rejected():
    C = ChainComplex({0: 2})
    with pytest.raises(BoundaryError):
        InvolutiveComplex(C, {0: [[1, 1], [0, 1]]})


def test_w_resolution():
    W = WResolution().complex(6)
    assert all(W.complex.homology(k).is_zero for k in range(1, 6))
    assert W.complex.homology(0).betti == 1


# -- homotopy windows and norm ----------------------------------------------------------------


def test_group_cohomology_of_z2():
    D = InvolutiveComplex.integers(1)
    assert z2_homotopy_window(D, "fixed", -1).homology().is_zero
    assert z2_homotopy_window(D, "fixed", -2).homology().as_dict() == {"betti": 0, "torsion": [2]}
    assert z2_homotopy_window(D, "fixed", 0).homology().as_dict() == {"betti": 1, "torsion": []}


def test_sign_orbits():
    D = InvolutiveComplex.integers(-1)
    assert z2_homotopy_window(D, "orbits", 0).homology().as_dict() == {"betti": 0, "torsion": [2]}


def test_zero_module_windows():
    D = InvolutiveComplex.trivial(ChainComplex({}))
    for kind in ("fixed", "orbits"):
        assert z2_homotopy_window(D, kind, 0).homology().is_zero


def test_norm_on_trivial_module_is_doubling():
    N = NormMap(InvolutiveComplex.integers(1), 0)
    _, _, M = N.homology_matrix()
    assert [[int(x) for x in r] for r in M] == [[2]]
    assert not N.is_iso() and N.is_iso(invert_two=True)


@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
def test_norm_on_free_module(n):
    assert NormMap(InvolutiveComplex.free(), n).is_iso()


@pytest.mark.parametrize("n", range(5))
def test_norm_on_sphere_square_after_inverting_two(n):
    C = corpus.load_unoriented("s2").chain_complex
    assert NormMap(InvolutiveComplex.tensor_square(C), n).is_iso(invert_two=True)
