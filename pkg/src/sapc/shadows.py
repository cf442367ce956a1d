"""Finite sanity checks for suspension, collapse and bordism invariance of the signature."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import scipy.sparse as sp

from . import forms
from .chaincore import ChainComplex, ChainMap, cochain_complex
from .equivariant import TensorChain, diagonal_chain
from .errors import HypothesisViolated
from .homalg import induced_map, map_is_iso
from .localsheaf import duality_certificate, pushforward
from .simplicial import OrientedManifoldComplex, SimplicialComplex, SimplicialMap, load_complex, star_family
from .symmetric import (
    SymmetricComplex,
    SymmetricPair,
    _free_classes,
    _subdivision,
    algebraic_sapc,
    middle_form,
    product_sapc,
    sap_pair_from_manifold_with_boundary,
    sapc_from_manifold,
    signature,
    signature_report,
)


def interval():
    """Δ¹ as an oriented 1-manifold with boundary ∂Δ¹ = [1] − [0]."""
    return load_complex({"name": "I", "vertices": 2, "top_simplices": [[0, 1]], "boundary_marked": True})


def interval_pair(window=2) -> SymmetricPair:
    return sap_pair_from_manifold_with_boundary(interval(), window=window, certify=True)


# -- suspension ------------------------------------------------------------------


def _cross(T: ChainComplex, degree, p, left, right):
    """kron(left, right) placed in the (p, degree−p) block of a tensor complex."""
    vec = np.zeros(T.rank(degree), dtype=np.int64)
    for bp, bq, start in T.tensor_blocks.get(degree, []):
        if bp == p:
            vec[start: start + len(left) * len(right)] = np.kron(left, right)
    return vec


def suspension_check(sc: SymmetricComplex, window=0):
    """Compare the form of X with the suspended form of the pair X × (Δ¹, ∂Δ¹).

    The suspended form pairs relative classes α×u with absolute classes β×1
    through Ψ₀ of the product pair, where u generates H¹(Δ¹, ∂Δ¹) and is
    normalized by ⟨u, ω⟩ = 1.  It equals the middle form of X on the same basis.
    """
    if sc.n % 4:
        raise HypothesisViolated("suspension check needs a 4k-dimensional complex")
    M_I = interval()
    I = sap_pair_from_manifold_with_boundary(M_I, window=window, certify=True)
    Q = product_sapc(sc, I)
    rel_I = I.relative_complex()
    D_I = I.complex

    def lift(p, a):
        full = np.zeros(D_I.rank(p), dtype=np.int64)
        full[rel_I.parent_index[p]] = a
        return full

    (u,) = _free_classes(cochain_complex(rel_I), 1, lift)
    omega_I = _subdivision(M_I.base).manifold(M_I).fundamental_cycle()
    u = u * int(u @ omega_I)
    one = np.ones(D_I.rank(0), dtype=np.int64)
    k = sc.n // 2
    basis = _free_classes(sc.cochains, k)
    DB = Q.complex
    psi0 = Q.psi.component(0)
    S = [
        [psi0.evaluate(k + 1, _cross(DB, k + 1, k, a, u), _cross(DB, k, k, b, one)) for b in basis]
        for a in basis
    ]
    G = middle_form(sc)
    return {
        "name": sc.name,
        "signature": forms.signature_of_form(G),
        "suspended_signature": forms.signature_of_form(S),
        "same_form": S == G,
        "boundary_equation": Q.boundary_defects() == [],
        "boundary_signature": signature(Q.boundary()),
    }


# -- collapse ----------------------------------------------------------------------


def _relative_basis(X: SimplicialComplex, Y: SimplicialComplex, dY: SimplicialComplex | None, K: set):
    """Indices per degree of simplices of X outside K and of Y outside ∂Y, matched by vertex tuple."""
    keep_x, keep_y, match = {}, {}, {}
    for k in range(X.dim + 1):
        outside = [s for s in X.simplices(k) if s not in K]
        yin = [s for s in Y.simplices(k) if dY is None or s not in dY]
        if sorted(outside) != sorted(yin):
            raise HypothesisViolated(f"X/K and Y/∂Y differ in degree {k}")
        keep_x[k] = np.array([s not in K for s in X.simplices(k)])
        keep_y[k] = np.array([dY is None or s not in dY for s in Y.simplices(k)])
        match[k] = outside
    return keep_x, keep_y, match


def collapse_check(X: OrientedManifoldComplex, Y: OrientedManifoldComplex, window=2):
    """X closed, Y ⊂ X a codimension-0 submanifold on the same vertex labels.

    q: C(X) → C(X)/C(K) with K the closure of X∖Y is compared with
    C(Y)/C(∂Y): chain complexes, fundamental classes, Δ_s(ω) for s ≤ window,
    homology, and relative signatures.
    """
    if not X.is_closed or Y.is_closed or X.n != Y.n:
        raise HypothesisViolated("need a closed X and a codimension-0 Y with boundary")
    Xs, Ys = X.base, Y.base
    if any(s not in Xs for s in Ys.all_simplices):
        raise HypothesisViolated("Y is not a subcomplex of X")
    n = X.n
    outside_tops = [s for s in Xs.simplices(n) if s not in Ys]
    K = set()
    for s in outside_tops:
        for r in range(1, len(s) + 1):
            K.update(combinations(s, r))
    dY = set(Y.boundary.all_simplices)
    if K & set(Ys.all_simplices) != dY:
        raise HypothesisViolated("Y ∩ closure(X∖Y) is not ∂Y")
    keep_x, keep_y, _ = _relative_basis(Xs, Ys, dY, K)
    QX = Xs.chain_complex.quotient(keep_x)
    QY = Ys.chain_complex.quotient(keep_y)
    same_complex = all(
        QX.rank(k) == QY.rank(k) and (QX.boundary(k) != QY.boundary(k)).nnz == 0 for k in range(1, n + 1)
    )
    omega_x = X.fundamental_cycle()[keep_x[n]]
    omega_y = Y.fundamental_cycle()[keep_y[n]]
    diagonals = []
    for s in range(window + 1):
        dx = diagonal_chain(Xs, s, n, X.fundamental_cycle())
        dy = diagonal_chain(Ys, s, n, Y.fundamental_cycle())
        diagonals.append(_restrict_tensor(dx, keep_x) == _restrict_tensor(dy, keep_y))
    q = ChainMap(
        Xs.chain_complex,
        QX,
        {k: sp.identity(Xs.chain_complex.rank(k), dtype=np.int64, format="csr")[keep_x[k]].tocsc() for k in range(n + 1)},
    )
    top_iso = map_is_iso(*induced_map(q, n))
    pair = sap_pair_from_manifold_with_boundary(Y, window=window, certify=False)
    closed = sapc_from_manifold(X, window=window, certify=False)
    return {
        "quotient_complexes_equal": same_complex,
        "fundamental_class": bool(np.array_equal(omega_x, omega_y)),
        "diagonals": diagonals,
        "top_homology_iso": top_iso,
        "signature_closed": signature(closed),
        "signature_pair": signature_report(pair).signature,
        "overall": same_complex and bool(np.array_equal(omega_x, omega_y)) and all(diagonals) and top_iso
        and signature(closed) == signature_report(pair).signature,
    }


def _restrict_tensor(x: TensorChain, keep):
    """Image of x in (C/K)⊗(C/K) as a dict of dense blocks keyed by left degree."""
    out = {}
    for p, m in x.blocks.items():
        q = x.degree - p
        sub = m[keep[p]][:, keep[q]].toarray()
        if sub.any():
            out[p] = sub.tolist()
    return out


def octahedron():
    tops = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return load_complex({"name": "octahedron", "vertices": 6, "top_simplices": [list(t) for t in tops], "boundary_marked": False})


def edge_contraction(M: OrientedManifoldComplex, u: int, v: int):
    """Simplicial map identifying v with u, and its image complex (vertices renumbered)."""
    keep = [w for w in range(M.base.vertex_count) if w != v]
    new = {w: i for i, w in enumerate(keep)}
    vmap = [new[u] if w == v else new[w] for w in range(M.base.vertex_count)]
    image = {tuple(sorted({vmap[w] for w in s})) for s in M.base.all_simplices}
    target = SimplicialComplex(len(keep), image)
    return SimplicialMap(M.base, target, vmap)


def pushforward_check(M: OrientedManifoldComplex, u: int, v: int, window=1, cap=20000):
    """Certificate of g_*C(M) with λ = φ₀ over the target's vertex-star opens, g an edge contraction."""
    g = edge_contraction(M, u, v)
    sc = sapc_from_manifold(M, window=window, certify=False)
    fam = star_family(g.target, "stars", cap)
    pushed = pushforward(g, sc.carrier, fam)
    cert = duality_certificate(pushed, pushed, sc.phi0, cap=cap)
    return cert


# -- bordism -----------------------------------------------------------------------


def random_unimodular(r, rng, steps=None):
    """Random product of elementary integer matrices and sign flips, with its inverse."""
    P = np.eye(r, dtype=object)
    Pinv = np.eye(r, dtype=object)
    for _ in range(steps or 4 * r):
        if r > 1:
            i, j = (int(x) for x in rng.choice(r, size=2, replace=False))
            c = int(rng.integers(-2, 3))
            P[i] = P[i] + c * P[j]
            Pinv[:, j] = Pinv[:, j] - c * Pinv[:, i]
        else:
            i = 0
        if rng.random() < 0.2:
            P[i] = -P[i]
            Pinv[:, i] = -Pinv[:, i]
    return P, Pinv


def metabolic_pair(r, k=1, seed=0):
    """Algebraic pair with boundary (ℤ^{2r} in degree 2k, G = Pᵀ[[0,I],[I,A]]P) and lagrangian quotient.

    Returns (boundary SymmetricComplex, F) where F: ℤ^{2r} → ℤ^r satisfies
    F G Fᵀ = 0, the boundary equation of a pair whose interior lives in a
    single degree (so ψ = 0).
    """
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(r, r))
    A = A + A.T
    H = np.zeros((2 * r, 2 * r), dtype=object)
    H[:r, r:] = np.eye(r, dtype=object)
    H[r:, :r] = np.eye(r, dtype=object)
    H[r:, r:] = A.astype(object)
    P, Pinv = random_unimodular(2 * r, rng)
    G = P.T.dot(H).dot(P)
    F = np.hstack([np.eye(r, dtype=object), np.zeros((r, r), dtype=object)]).dot(Pinv.T)
    C = ChainComplex({2 * k: 2 * r})
    sc = algebraic_sapc(C, 4 * k, [[int(x) for x in row] for row in G], name=f"metabolic{r}")
    return sc, F, G


def metabolic_boundary_equation(F, G):
    return not np.any(F.dot(G).dot(F.T))
