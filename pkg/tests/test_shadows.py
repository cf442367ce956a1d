import numpy as np
import pytest

from sapc import corpus
from sapc.errors import HypothesisViolated
from sapc.shadows import (
    collapse_check,
    edge_contraction,
    interval,
    metabolic_boundary_equation,
    metabolic_pair,
    octahedron,
    pushforward_check,
    suspension_check,
)
from sapc.symmetric import sapc_from_manifold

import oracles


@pytest.mark.parametrize("name, expected", [("cp2_9", 1), ("s4", 0)])
def test_suspension_reproduces_the_form(name, expected):
    sc = sapc_from_manifold(corpus.load(name), window=1, certify=False)
    r = suspension_check(sc)
    assert r["same_form"] and r["boundary_equation"]
    assert r["signature"] == r["suspended_signature"] == expected
    assert r["boundary_signature"] == 0


def test_suspension_needs_4k(manifolds):
    sc = sapc_from_manifold(manifolds["s2"], window=0, certify=False)
    with pytest.raises(HypothesisViolated):
        suspension_check(sc)


def test_collapse_onto_hemisphere():
    r = collapse_check(corpus.load("s2"), corpus.load("d2_hemisphere"), window=2)
    assert r["quotient_complexes_equal"] and r["fundamental_class"] and r["top_homology_iso"]
    assert r["diagonals"] == [True, True, True]
    assert r["overall"]


def test_collapse_rejects_closed_subspace():
    with pytest.raises(HypothesisViolated):
        collapse_check(corpus.load("s2"), corpus.load("s2"))


def test_interval_boundary():
    I = interval()
    assert not I.is_closed
    assert list(I.base.chain_complex.boundary(1) @ I.fundamental_cycle()) == [-1, 1]


def test_octahedron_and_contraction():
    M = octahedron()
    assert M.is_closed and M.base.f_vector == (6, 12, 8)
    g = edge_contraction(M, 0, 2)
    assert g.target.vertex_count == 5
    # contracting an edge of the octahedron leaves a 5-vertex sphere with 6 triangles
    assert g.target.f_vector == (5, 9, 6) and g.target.euler_characteristic() == 2


def test_pushforward_along_contraction():
    cert = pushforward_check(octahedron(), 0, 2)
    assert cert.overall and cert.entries


@pytest.mark.parametrize("seed", range(6))
def test_metabolic_pair(seed):
    sc, F, G = metabolic_pair(1 + seed % 3, 1 + seed % 2, seed)
    assert metabolic_boundary_equation(F, G)
    assert np.linalg.matrix_rank(np.array(F, dtype=float)) == len(G) // 2
    assert oracles.signature_float(G) == 0
