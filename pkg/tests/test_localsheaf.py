import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from sapc import corpus
from sapc.chaincore import ChainComplex
from sapc.errors import CoverViolation, HypothesisViolated, InvalidLocalSystem
from sapc.homalg import induced_map
from sapc.localsheaf import (
    LocalSystem,
    PosetDiagram,
    box_economy,
    core_closed_sets,
    descent_check,
    duality_certificate,
    excision_square_check,
    guide_object,
    holim_poset,
    hocolim_poset,
    pushforward,
    same_filtration,
    slant_duality,
)
from sapc.simplicial import OpenFamily, SimplicialComplex, SimplicialMap, load_complex, star_family
from sapc.suite import random_covers
from sapc.symmetric import sapc_from_manifold

import oracles


@pytest.fixture(scope="module")
def sphere():
    X = corpus.load_unoriented("s2")
    fam = star_family(X)
    return X, fam, guide_object(SimplicialMap.identity(X), fam)


def point_complex():
    return SimplicialComplex(1, [(0,)])


# -- guide objects ------------------------------------------------------------------------


def test_vertex_star_carries_only_its_vertex(sphere):
    X, fam, _ = sphere
    G = guide_object(SimplicialMap.identity(X), fam, subdivide=False)
    for (v,) in X.simplices(0):
        mem = G.members(fam.star((v,)))
        assert [X.simplices(0)[i] for i in np.flatnonzero(mem[0])] == [(v,)]
        assert not mem[1].any() and not mem[2].any()


def test_constant_map(sphere):
    X, _, _ = sphere
    P = point_complex()
    fam = star_family(P)
    G = guide_object(SimplicialMap.constant(X, P), fam, subdivide=False)
    assert all(m.all() for m in G.members(fam.full).values())
    assert not any(m.any() for m in G.members(0).values())


def test_edge_into_sphere_exhaustive(sphere):
    X, fam, _ = sphere
    E = SimplicialComplex.simplex(1)
    f = SimplicialMap(E, X, [1, 3])
    G = guide_object(f, fam, subdivide=False)
    stars = {v: fam.star((v,)) for v in range(4)}
    for U in fam.lattice():
        mem = G.members(U)
        for k in (0, 1):
            for i, s in enumerate(E.simplices(k)):
                carrier = {f.vertex_map[v] for v in s}
                assert mem[k][i] == all((stars[v] & ~U) == 0 or (U >> X.gid((v,))) & 1 for v in carrier)
                # support only depends on U ∩ image
                assert mem[k][i] == all((U >> X.gid((v,))) & 1 for v in carrier)


@given(st.data())
def test_intersections_are_label_exact(sphere, data):
    X, fam, G = sphere
    lattice = fam.lattice()
    U = data.draw(st.sampled_from(lattice))
    V = data.draw(st.sampled_from(lattice))
    a, b, c = G.members(U), G.members(V), G.members(U & V)
    for k in c:
        assert np.array_equal(c[k], a[k] & b[k])


def test_free_in_minimal_opens(sphere):
    _, fam, G = sphere
    lattice = fam.lattice()
    for k in (0, 1, 2):
        for i in range(0, G.total.rank(k), 7):
            m = G.minimal_open(k, i)
            for V in lattice[::5]:
                assert G.member(k, i, V) == ((m & ~V) == 0)


def test_empty_and_total(sphere):
    _, fam, G = sphere
    assert not any(m.any() for m in G.members(0).values())
    assert all(m.all() for m in G.members(fam.full).values())


def test_broken_predicate_rejected(sphere):
    X, fam, _ = sphere
    C = X.chain_complex
    u, v = fam.star((0,)), fam.star((1,))

    def member(k, i, U):
        # in U and in V separately but not in U ∩ V: not intersection-compatible
        return U in (u, v, u | v, fam.full)

    with pytest.raises(InvalidLocalSystem):
        LocalSystem.from_predicate(fam, C, member, opens=[0, u, v, u & v, u | v, fam.full])


def test_unclosed_membership_rejected(sphere):
    X, fam, _ = sphere
    C = X.chain_complex
    # edges carried by the star of 0 alone, but their endpoints are not
    gens = {0: [[X.gid(s)] for s in X.simplices(0)], 1: [[X.gid((0,))]] * 6, 2: [[X.gid(s)] for s in X.simplices(2)]}
    with pytest.raises(InvalidLocalSystem):
        LocalSystem(fam, C, gens)


# -- pushforward ------------------------------------------------------------------------------


def test_pushforward_identity(sphere):
    X, fam, G = sphere
    pushed = pushforward(SimplicialMap.identity(X), G, fam)
    assert same_filtration(pushed, G, fam.lattice())


def test_pushforward_collapse(sphere):
    X, fam, G = sphere
    P = point_complex()
    pfam = star_family(P)
    pushed = pushforward(SimplicialMap.constant(X, P), G, pfam)
    assert pushed.total is G.total
    assert not any(m.any() for m in pushed.members(0).values())
    assert all(m.all() for m in pushed.members(pfam.full).values())


def test_pushforward_composite(sphere):
    X, fam, G = sphere
    Y = SimplicialComplex.simplex(1)
    g = SimplicialMap(X, Y, [0, 0, 1, 1])
    P = point_complex()
    h = SimplicialMap.constant(Y, P)
    yfam, pfam = star_family(Y), star_family(P)
    two_steps = pushforward(h, pushforward(g, G, yfam), pfam)
    one_step = pushforward(h.compose(g), G, pfam)
    assert same_filtration(two_steps, one_step, pfam.lattice())


# -- homotopy limits over posets ---------------------------------------------------------------


def _diagram(values, less, maps):
    def m(q, p, k):
        shape = (values[p].rank(k), values[q].rank(k))
        if k != 0 or 0 in shape:
            return sp.csc_matrix(shape, dtype=np.int64)
        return sp.csc_matrix(np.array(maps[(q, p)], dtype=np.int64))

    return PosetDiagram(range(len(values)), less, values, m)


def test_one_point_poset():
    Z = ChainComplex({0: 1})
    D = _diagram([Z], np.zeros((1, 1), dtype=bool), {})
    assert holim_poset(D).homology(0).betti == 1
    assert hocolim_poset(D).homology(0).betti == 1


@pytest.mark.parametrize(
    "values,fa,fb,h0,h_1",
    [
        ((1, 1, 0), None, None, (2, []), (0, [])),
        ((1, 1, 1), 1, 1, (1, []), (0, [])),
        ((1, 1, 1), 2, 2, (1, []), (0, [2])),
        ((1, 1, 1), 0, 0, (2, []), (1, [])),
    ],
)
def test_pullback_poset(values, fa, fb, h0, h_1):
    # a, b, c with c ≤ a and c ≤ b: maps F(a) → F(c) ← F(b)
    vals = [ChainComplex({0: r}) for r in values]
    less = np.zeros((3, 3), dtype=bool)
    less[2, 0] = less[2, 1] = True
    maps = {}
    if values[2]:
        maps = {(0, 2): [[fa]], (1, 2): [[fb]]}
    H = holim_poset(_diagram(vals, less, maps))
    got0, got1 = H.homology(0), H.homology(-1)
    assert (got0.betti, list(got0.torsion)) == h0
    assert (got1.betti, list(got1.torsion)) == h_1
    # direct two-term total complex F(a)⊕F(b) → F(c), (x, y) ↦ f x − g y
    if values[2]:
        d = [[fa, -fb]]
        diag = oracles.determinantal_divisors(d)
        assert h0[0] == 2 - len(diag)
        assert h_1 == (1 - len(diag), [x for x in diag if x > 1])


# -- descent ------------------------------------------------------------------------------------


def test_codescent_two_stars(sphere):
    X, fam, G = sphere
    u, v = fam.up_closure([(0,), (1,)]), fam.up_closure([(1,), (2,)])
    r = descent_check(G, [u, v, u & v], "codescent")
    assert r["overall"]


def test_descent_union_closure(sphere):
    X, fam, G = sphere
    u, v = fam.up_closure([(0,), (1,)]), fam.up_closure([(1,), (2,)])
    r = descent_check(G, [u, v, u | v], "descent")
    assert r["overall"]


def test_singleton_cover(sphere):
    _, fam, G = sphere
    for mode in ("descent", "codescent"):
        assert descent_check(G, [fam.star((0,))], mode)["overall"]


def test_descent_needs_closed_collection(sphere):
    _, fam, G = sphere
    u, v = fam.star((0,)), fam.star((1,))
    with pytest.raises(HypothesisViolated):
        descent_check(G, [u, v], "descent")


@settings(max_examples=8)
@given(st.sampled_from(["s2", "t2_7", "rp2_6", "d2_hemisphere"]), st.integers(0, 10**6))
def test_random_good_covers(name, seed):
    X = corpus.load_unoriented(name)
    fam = star_family(X)
    G = guide_object(SimplicialMap.identity(X), fam)
    for mode, W in random_covers(fam, 2, seed):
        assert descent_check(G, W, mode)["overall"]


# -- slant duality ---------------------------------------------------------------------------


def test_point_duality():
    M = load_complex({"name": "pt", "vertices": 1, "top_simplices": [[0]], "boundary_marked": False})
    sc = sapc_from_manifold(M, window=0, certify=False)
    r = slant_duality(sc.carrier, sc.carrier, sc.phi0, sc.carrier.family.full)
    assert r["overall"] and [d["j"] for d in r["degrees"]] == [0]


def test_sphere_global_and_star_duality():
    M = corpus.load("s2")
    sc = sapc_from_manifold(M, window=0, certify=False)
    fam = sc.carrier.family
    whole = slant_duality(sc.carrier, sc.carrier, sc.phi0, fam.full)
    assert whole["overall"]
    assert [d["target"] for d in whole["degrees"]] == [
        {"betti": 1, "torsion": []},
        {"betti": 0, "torsion": []},
        {"betti": 1, "torsion": []},
    ]
    local = slant_duality(sc.carrier, sc.carrier, sc.phi0, fam.star((0,)))
    assert local["overall"]
    assert local["degrees"][0]["target"] == {"betti": 1, "torsion": []}
    assert local["degrees"][2]["target"] == {"betti": 0, "torsion": []}


def test_sphere_certificate_covers_lattice():
    M = corpus.load("s2")
    sc = sapc_from_manifold(M, window=0, certify=False)
    cert = duality_certificate(sc.carrier, sc.carrier, sc.phi0)
    assert cert.coverage == "lattice" and cert.lattice_size == 166 and cert.overall


def test_wrong_class_fails_duality():
    M = corpus.load("s2")
    sc = sapc_from_manifold(M, window=0, certify=False)
    r = slant_duality(sc.carrier, sc.carrier, 2 * sc.phi0, sc.carrier.family.full)
    assert not r["overall"]


# -- excision ---------------------------------------------------------------------------------


def test_hemisphere_excision(sphere):
    X, fam, G = sphere
    U, V = fam.up_closure([(0,), (1,), (2,)]), fam.up_closure([(1,), (2,), (3,)])
    r = excision_square_check(G, U, V)
    assert r["mayer_vietoris_exact"] and r["pushout"] and r["relative_quasi_iso"]
    assert [h["betti"] for h in r["homology"]["intersection"]] == [1, 1, 0]
    assert r["connecting"][2] is not None and abs(r["connecting"][2][0][0]) == 1


def test_torus_excision():
    X = corpus.load_unoriented("t2_7")
    fam = star_family(X)
    G = guide_object(SimplicialMap.identity(X), fam)
    U = fam.up_closure([(v,) for v in (0, 1, 2, 3)])
    V = fam.up_closure([(v,) for v in (3, 4, 5, 6)])
    r = excision_square_check(G, U, V)
    assert r["overall"]
    assert r["homology"]["X"][1]["betti"] == 2


def test_trivial_excision(sphere):
    _, fam, G = sphere
    r = excision_square_check(G, fam.full, fam.star((0,)))
    assert r["overall"]


def test_excision_needs_cover(sphere):
    _, fam, G = sphere
    with pytest.raises(CoverViolation):
        excision_square_check(G, fam.star((0,)), fam.star((1,)))


# -- economy box product ------------------------------------------------------------------------


def test_box_of_point():
    P = point_complex()
    fam = star_family(P)
    G = guide_object(SimplicialMap.identity(P), fam)
    box = box_economy(G, G, 0, window=1, opens=[fam.full], closed=[fam.full])
    assert box.triples == [(fam.full, fam.full, fam.full)]
    assert box.homology(0).betti == 1


def test_box_tau_and_specialization(sphere):
    X, _, _ = sphere
    fam = OpenFamily(X, [[(0,), (1,)], [(2,), (3,)]])
    G = guide_object(SimplicialMap.identity(X), fam)
    box = box_economy(G, G, 2, 1, closed=core_closed_sets(fam, fam.basis()))
    assert box.check_tau()
    src, dst, M = induced_map(box.specialization(), 2)
    # surjective on H₂: the image has full rank over ℚ on the free part
    free_dst = sum(1 for o in dst if o == 0)
    assert oracles.rank_q([[int(x) for x in row] for row in M]) >= free_dst
