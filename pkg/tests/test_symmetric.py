import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sapc import corpus
from sapc.chaincore import ChainComplex
from sapc.errors import HypothesisViolated, InconsistentOrientation
from sapc.shadows import interval, interval_pair, metabolic_boundary_equation, metabolic_pair, random_unimodular
from sapc.simplicial import load_complex, product_complex, to_document
from sapc.symmetric import (
    algebraic_sapc,
    is_nondegenerate,
    middle_form,
    product_sapc,
    relative_certificate,
    reversed_sapc,
    sap_pair_from_manifold_with_boundary,
    sapc_from_manifold,
    signature,
    signature_report,
)

import oracles


@pytest.fixture(scope="module")
def cp2():
    return sapc_from_manifold(corpus.load("cp2_9"), window=2, certify=False)


@pytest.fixture(scope="module")
def s2():
    return sapc_from_manifold(corpus.load("s2"), window=2, certify=True)


def test_cp2_signature_matches_cup_product_oracle(cp2, docs):
    sig, rank = oracles.cup_signature(docs["cp2_9"])
    rep = signature_report(cp2)
    assert (rep.signature, rep.rank) == (sig, rank) == (1, 1)
    assert rep.form in (((1,),), ((-1,),)) and rep.as_dict()["unimodular"]


def test_cp2_reversed(cp2, docs):
    assert signature(reversed_sapc(cp2)) == -1
    flipped = dict(docs["cp2_9"], orientation_signs=[-e for e in docs["cp2_9"]["orientation_signs"]])
    assert oracles.cup_signature(flipped)[0] == -1
    assert signature(sapc_from_manifold(load_complex(flipped), window=0, certify=False)) == -1


def test_s4_signature():
    sc = sapc_from_manifold(corpus.load("s4"), window=1, certify=False)
    rep = signature_report(sc)
    assert rep.signature == 0 and rep.rank == 0 and not rep.flagged


def test_two_dimensional_signature_is_flagged(s2):
    rep = signature_report(s2)
    assert rep.flagged and rep.signature == 0


def test_sphere_certificate(s2):
    cert = s2.certificate
    assert cert.overall and cert.coverage == "lattice" and len(cert.entries) == 166


def test_torus_certificate():
    sc = sapc_from_manifold(corpus.load("t2_7"), window=1, certify=True, spot_checks=4)
    assert sc.certificate.overall
    assert sc.certificate.coverage == "basis+unions"
    assert sc.certificate.lattice_size == 15761632


def test_reversal_preserves_nondegeneracy(s2):
    assert is_nondegenerate(reversed_sapc(s2))[0]


def test_rp2_rejected(docs):
    with pytest.raises(InconsistentOrientation):
        load_complex(docs["rp2_6"])


def test_closed_manifold_required():
    with pytest.raises(HypothesisViolated):
        sapc_from_manifold(corpus.load("d4"))


# -- pairs --------------------------------------------------------------------------------------


def test_disk_pair_boundary_is_sphere_sapc():
    M = corpus.load("d4")
    pair = sap_pair_from_manifold_with_boundary(M, window=2, certify=False)
    assert relative_certificate(pair).overall and pair.boundary_defects() == []
    ok, cert = is_nondegenerate(pair.boundary(), cap=500, spot_checks=4)
    assert ok and cert.coverage == "basis+unions" and cert.lattice_size == 7579
    fresh = sapc_from_manifold(M.boundary_manifold(), window=2, certify=False)
    for s in range(3):
        assert list(pair.boundary().structure.component(s).terms()) == list(fresh.structure.component(s).terms())
    assert signature(pair.boundary()) == 0


def test_cylinder_boundary_has_opposite_ends(manifolds):
    S = manifolds["s2"]
    P = product_complex(S, interval())
    pair = sap_pair_from_manifold_with_boundary(P, window=1, certify=True)
    B = P.boundary_manifold()
    labels = P.base.vertex_labels
    sphere_sign = {t: int(e) for t, e in zip(S.base.simplices(2), S.signs)}
    ends = {}
    for t, e in zip(B.base.simplices(2), B.signs):
        ends.setdefault(labels[t[0]][1], set()).add(int(e) * sphere_sign[tuple(labels[v][0] for v in t)])
    assert ends == {0: {-1}, 1: {1}} or ends == {0: {1}, 1: {-1}}
    assert signature(pair.boundary()) == 0


def test_interval_pair():
    I = interval_pair(window=2)
    assert I.dimension == 1 and I.boundary_defects() == []
    assert I.boundary().complex.rank(0) == 2


def test_hemisphere_pair():
    pair = sap_pair_from_manifold_with_boundary(corpus.load("d2_hemisphere"), window=2, certify=True)
    assert pair.certificate.overall and signature(pair.boundary()) == 0


# -- bare algebraic complexes -----------------------------------------------------------------------


def test_skew_antidiagonal_is_nondegenerate():
    sc = algebraic_sapc(ChainComplex({1: 2}), 2, [[0, 1], [-1, 0]])
    assert is_nondegenerate(sc)[0]


def test_even_pairing_is_degenerate():
    sc = algebraic_sapc(ChainComplex({1: 1}), 2, [[2]])
    ok, cert = is_nondegenerate(sc)
    assert not ok and cert.failing()


def test_point_times_point():
    pt = algebraic_sapc(ChainComplex({0: 1}), 0, [[1]], name="pt")
    P = product_sapc(pt, pt)
    assert P.n == 0 and P.complex.ranks == {0: 1}
    assert list(P.phi0.terms()) == [(0, 0, 0, 1)]


@st.composite
def algebraic_forms(draw, k=None):
    k = draw(st.sampled_from([0, 1])) if k is None else k
    r = draw(st.integers(1, 3))
    entries = draw(st.lists(st.integers(-3, 3), min_size=r * r, max_size=r * r))
    A = np.array(entries, dtype=np.int64).reshape(r, r)
    G = (A + A.T).tolist()
    return algebraic_sapc(ChainComplex({2 * k: r}), 4 * k, G), G


@given(algebraic_forms(), algebraic_forms())
def test_product_signature_is_multiplicative(a, b):
    (sa, Ga), (sb, Gb) = a, b
    P = product_sapc(sa, sb)
    assert signature(P) == signature(sa) * signature(sb)
    assert signature(P) == oracles.signature_float(np.kron(Ga, Gb))


@given(algebraic_forms())
def test_reversal_negates_signature(a):
    sc, G = a
    assert signature(reversed_sapc(sc)) == -signature(sc) == -oracles.signature_float(G)


@given(algebraic_forms(), st.integers(0, 2**32 - 1))
def test_signature_independent_of_basis(a, seed):
    sc, G = a
    P, _ = random_unimodular(len(G), np.random.default_rng(seed))
    H = [[int(x) for x in r] for r in P.T.dot(np.array(G, dtype=object)).dot(P)]
    moved = algebraic_sapc(ChainComplex({sc.n // 2: len(G)}), sc.n, H)
    assert signature(moved) == signature(sc)
    assert is_nondegenerate(moved)[0] == is_nondegenerate(sc)[0]


@settings(max_examples=20)
@given(st.integers(1, 3), st.sampled_from([1, 2]), st.integers(0, 10**6))
def test_metabolic_boundaries_have_signature_zero(r, k, seed):
    sc, F, G = metabolic_pair(r, k, seed)
    assert metabolic_boundary_equation(F, G)
    assert signature(sc) == 0
    assert is_nondegenerate(sc)[0]


# -- products of manifolds --------------------------------------------------------------------------


def test_sphere_squared_product(s2):
    P = product_sapc(s2, s2)
    rep = signature_report(P)
    assert rep.signature == 0 and rep.rank == 2 and rep.hyperbolic
    assert oracles.signature_float(middle_form(P)) == 0


def test_triangulated_sphere_squared_matches_oracle(manifolds):
    M = manifolds["s2"]
    PM = product_complex(M, M)
    assert oracles.cup_signature(to_document(PM)) == (0, 2)
    rep = signature_report(sapc_from_manifold(PM, window=0, certify=False))
    assert (rep.signature, rep.rank, rep.hyperbolic) == (0, 2, True)


def test_sphere_times_interval_bordism(s2):
    Q = product_sapc(s2, interval_pair(2))
    assert Q.boundary_defects() == []
    assert signature_report(Q.boundary()).signature == 0


def test_factored_product_multiplicative(cp2):
    s4 = sapc_from_manifold(corpus.load("s4"), window=2, certify=False)
    for a, b in [(cp2, cp2), (cp2, reversed_sapc(cp2)), (cp2, s4)]:
        P = product_sapc(a, b, materialize=False)
        assert P.is_factored
        assert signature(P) == signature(a) * signature(b)
