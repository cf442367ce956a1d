"""Symmetric Poincaré complexes and pairs built from oriented triangulations.

The chain model of a manifold M is its barycentric subdivision: the carrier
is the guide object of the identity (a local system over the vertex-star
opens of M) and the structure is φ_s = (−1)^{ns} Δ_s(ω) on sd(M).  A bare
global mode (no carrier) takes any chain complex with a degree-n cycle φ₀.

Signatures come from the middle form (α, β) ↦ (α⊗β)(φ₀) on a basis of the
free part of H^{n/2}; for products too large to build the form is assembled
from the factors' pairings on cross-product classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import forms
from .chaincore import ChainComplex, ChainMap, cochain_complex, tensor_complex
from .equivariant import SymmetricStructure, TensorChain, _sign, symmetric_construction
from .errors import BoundaryError, HypothesisViolated, NondegenerateCheckFailed, ShapeMismatch
from .homalg import group_dict, map_is_iso
from .localsheaf import DualityCertificate, LocalSystem, duality_certificate, guide_object
from .simplicial import (
    OpenFamily,
    OrientedManifoldComplex,
    SimplicialComplex,
    SimplicialMap,
    Subdivision,
    product_complex,
    staircases,
    star_family,
)

MATERIALIZE_LIMIT = 250_000


@dataclass
class SymmetricComplex:
    """n-dimensional symmetric complex; ``carrier`` is None in the bare global mode."""

    complex: ChainComplex | None
    structure: SymmetricStructure | None
    n: int
    carrier: LocalSystem | None = None
    certificate: DualityCertificate | None = None
    name: str = ""
    manifold: OrientedManifoldComplex | None = None
    factors: tuple = ()
    source: OrientedManifoldComplex | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def phi0(self) -> TensorChain:
        return self.structure.component(0)

    @property
    def is_factored(self):
        return self.complex is None

    @property
    def cochains(self):
        if "cochains" not in self._cache:
            self._cache["cochains"] = cochain_complex(self.complex)
        return self._cache["cochains"]


@dataclass
class SymmetricPair:
    """f: C → D with φ on C (dimension n) and ψ on D (dimension n+1), dψ = (f⊗f)φ."""

    inclusion: ChainMap
    boundary_sc: SymmetricComplex
    psi: SymmetricStructure
    n: int
    name: str = ""
    certificate: DualityCertificate | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self):
        return self.n + 1

    @property
    def complex(self):
        return self.inclusion.target

    def boundary(self) -> SymmetricComplex:
        return self.boundary_sc

    def boundary_defects(self):
        """Windows s where ∂ψ_s − (−1)^{n+1}(1+(−1)^sT)ψ_{s−1} ≠ (f⊗f)φ_s."""
        f = self.inclusion
        bad = []
        for s in range(self.psi.window + 1):
            lhs = self.psi.defect(s)
            rhs = self.boundary_sc.structure.component(s).apply(f, f)
            if not (lhs == rhs):
                bad.append(s)
        return bad

    def relative_complex(self):
        """D/f(C) for an injective inclusion given by a 0/1 matrix."""
        if "rel" not in self._cache:
            D = self.complex
            keep = {}
            for k in D.degrees:
                hit = np.zeros(D.rank(k), dtype=bool)
                comp = self.inclusion.component(k)
                if comp.shape[1]:
                    hit[np.unique(comp.tocoo().row)] = True
                keep[k] = ~hit
            self._cache["rel"] = D.quotient(keep)
        return self._cache["rel"]


# -- construction from manifolds ------------------------------------------------


def _subdivision(X: SimplicialComplex) -> Subdivision:
    sd = getattr(X, "_subdivision", None)
    if sd is None:
        sd = Subdivision(X)
        X._subdivision = sd
    return sd


def sapc_from_manifold(
    M: OrientedManifoldComplex,
    family: OpenFamily | None = None,
    window=2,
    certify=True,
    cap=20000,
    jobs=1,
    spot_checks=8,
    seed=0,
) -> SymmetricComplex:
    """Guide-object carrier on sd(M) with φ_s = (−1)^{ns}Δ_s(ω_sd), certified over the family."""
    if not M.is_closed:
        raise HypothesisViolated(f"{M.name} has boundary; build a pair instead")
    if family is None:
        family = star_family(M.base, "stars", cap)
    elif family.X is not M.base:
        raise ShapeMismatch("the open family lives on a different complex")
    carrier = guide_object(SimplicialMap.identity(M.base), family, name=M.name)
    Msd = _subdivision(M.base).manifold(M)
    structure = symmetric_construction(Msd, window)
    bad = structure.check()
    if bad:
        raise BoundaryError(f"structure relations fail at s = {bad}")
    sc = SymmetricComplex(carrier.total, structure, M.n, carrier, None, M.name, Msd, source=M)
    if certify:
        ok, cert = is_nondegenerate(sc, cap=cap, jobs=jobs, spot_checks=spot_checks, seed=seed)
        sc.certificate = cert
        if not ok:
            raise NondegenerateCheckFailed(cert.failing())
    return sc


def algebraic_sapc(C: ChainComplex, n: int, phi0, name="algebraic") -> SymmetricComplex:
    """Bare global mode: C with φ₀ given as a TensorChain or, for C in one degree, a matrix."""
    if not isinstance(phi0, TensorChain):
        degs = [k for k in C.degrees if C.rank(k)]
        if len(degs) != 1 or 2 * degs[0] != n:
            raise ShapeMismatch("a matrix φ₀ needs C concentrated in degree n/2")
        phi0 = TensorChain(C, C, n, {degs[0]: sp.csr_matrix(np.asarray(phi0, dtype=np.int64))})
    if not phi0.boundary().is_zero():
        raise BoundaryError("φ₀ is not a cycle")
    structure = SymmetricStructure(C, n, {0: phi0}, 0)
    return SymmetricComplex(C, structure, n, None, None, name)


def _flag_inclusion(B: SimplicialComplex, M: SimplicialComplex) -> ChainMap:
    """sd(B) → sd(M) for a subcomplex B of M on the same vertex numbering."""
    sdB, sdM = _subdivision(B), _subdivision(M)
    to_m = np.array([M.gid(s) for s in B.all_simplices], dtype=np.int64)
    comps = {}
    for k in range(sdB.sd.dim + 1):
        flags = sdB.sd.simplices(k)
        rows = [sdM.sd.index[tuple(int(to_m[g]) for g in fl)] for fl in flags]
        comps[k] = sp.csc_matrix(
            (np.ones(len(rows), dtype=np.int64), (rows, range(len(rows)))),
            shape=(len(sdM.sd.simplices(k)), len(flags)),
        )
    return ChainMap(sdB.sd.chain_complex, sdM.sd.chain_complex, comps)


def sap_pair_from_manifold_with_boundary(M: OrientedManifoldComplex, window=2, certify=True, cap=20000) -> SymmetricPair:
    """(sd ∂M → sd M, ψ_s = (−1)^{Ns}Δ_s(ω_M)) with the boundary equation checked exactly."""
    if M.is_closed:
        raise HypothesisViolated(f"{M.name} has empty boundary")
    B = M.boundary_manifold()
    boundary_sc = sapc_from_manifold(B, window=window, certify=certify, cap=cap)
    f = _flag_inclusion(B.base, M.base)
    Msd = _subdivision(M.base).manifold(M)
    psi = symmetric_construction(Msd, window)
    pair = SymmetricPair(f, boundary_sc, psi, M.n - 1, M.name)
    bad = pair.boundary_defects()
    if bad:
        raise BoundaryError(f"boundary equation fails at s = {bad}")
    if certify:
        pair.certificate = relative_certificate(pair)
        if not pair.certificate.overall:
            raise NondegenerateCheckFailed(pair.certificate.failing())
    return pair


# -- nondegeneracy --------------------------------------------------------------


def _cohomology_classes(cochains: ChainComplex, p):
    """(orders, representatives) of H^p from a cochain complex."""
    if not cochains.rank(-p):
        return [], []
    reps = [np.array([int(x) for x in r], dtype=np.int64) for r in cochains.engine.representatives(-p)]
    return cochains.engine.order(-p), reps


def _slant_entry(label, n, source_cochains, lift, lam: TensorChain, target: ChainComplex, degree_shift=0):
    degrees = []
    for j in range(0, n + 1):
        p = n - j
        src_orders, reps = _cohomology_classes(source_cochains, p)
        dst_orders = target.engine.order(j) if target.rank(j) else []
        cols = []
        for alpha in reps:
            image = lam.slant(p, lift(p, alpha))
            cols.append(target.engine.coordinates(j, image) if dst_orders else [])
        M = [[cols[c][r] for c in range(len(cols))] for r in range(len(dst_orders))]
        iso = map_is_iso(src_orders, dst_orders, M)
        degrees.append({"j": j, "source": group_dict(src_orders), "target": group_dict(dst_orders), "iso": iso})
    return {"open": label, "degrees": degrees, "overall": all(d["iso"] for d in degrees)}


def global_certificate(sc: SymmetricComplex) -> DualityCertificate:
    """Slant with φ₀ as a map H^{n−j}(C) → H_j(C) for every j."""
    entry = _slant_entry("X", sc.n, sc.cochains, lambda p, a: a, sc.phi0, sc.complex)
    return DualityCertificate(sc.n, "global", [entry])


def relative_certificate(pair: SymmetricPair) -> DualityCertificate:
    """Slant with ψ₀ as a map H^{n+1−j}(D, C) → H_j(D)."""
    rel = pair.relative_complex()
    D = pair.complex

    def lift(p, alpha):
        full = np.zeros(D.rank(p), dtype=np.int64)
        full[rel.parent_index[p]] = alpha
        return full

    entry = _slant_entry("X rel boundary", pair.dimension, cochain_complex(rel), lift, pair.psi.component(0), D)
    return DualityCertificate(pair.dimension, "global", [entry])


def is_nondegenerate(sc: SymmetricComplex, opens=None, cap=None, jobs=1, spot_checks=0, seed=0):
    """(verdict, certificate): per-open slant duality, or the global test in bare mode."""
    if sc.is_factored:
        raise HypothesisViolated("a factored product is certified through its factors")
    if sc.carrier is None:
        cert = global_certificate(sc)
    else:
        cert = duality_certificate(
            sc.carrier, sc.carrier, sc.phi0, opens=opens, cap=cap, jobs=jobs, spot_checks=spot_checks, seed=seed
        )
    return cert.overall, cert


# -- middle forms and signatures ---------------------------------------------------


@dataclass(frozen=True)
class SignatureReport:
    signature: int
    flagged: bool
    rank: int
    form: tuple

    @property
    def hyperbolic(self):
        return forms.is_hyperbolic([list(r) for r in self.form])

    def as_dict(self):
        out = {"signature": self.signature, "flagged": self.flagged, "middle_rank": self.rank}
        if not self.flagged:
            out["unimodular"] = forms.is_unimodular([list(r) for r in self.form])
            out["hyperbolic"] = self.hyperbolic
        return out


def _free_classes(cochains, p, lift=None):
    orders, reps = _cohomology_classes(cochains, p)
    free = [r for o, r in zip(orders, reps) if o == 0]
    if lift is not None:
        free = [lift(p, r) for r in free]
    return free


def pairing_matrix(lam: TensorChain, left, right, p):
    """[(α_i⊗β_j)(λ)] for α_i of degree p and β_j of degree deg λ − p."""
    if not left or not right:
        return np.zeros((len(left), len(right)), dtype=object)
    m = lam.block(p)
    A = np.array(left, dtype=np.int64)
    Bm = np.array(right, dtype=np.int64)
    out = A @ (m @ Bm.T)
    return np.array([[int(x) for x in row] for row in np.asarray(out)], dtype=object)


def middle_form(sc: SymmetricComplex):
    """Gram matrix of (α, β) ↦ (α⊗β)(φ₀) on free H^{n/2} classes (None if n is odd)."""
    if sc.n % 2:
        return None
    if sc.is_factored:
        return factored_middle_form(sc)
    if "form" not in sc._cache:
        k = sc.n // 2
        basis = _free_classes(sc.cochains, k)
        sc._cache["form"] = pairing_matrix(sc.phi0, basis, basis, k).tolist()
    return sc._cache["form"]


def pair_middle_form(pair: SymmetricPair):
    """Relative form on free H^{(n+1)/2}(D, C) via ψ₀."""
    N = pair.dimension
    if N % 2:
        return None
    rel = pair.relative_complex()
    D = pair.complex

    def lift(p, alpha):
        full = np.zeros(D.rank(p), dtype=np.int64)
        full[rel.parent_index[p]] = alpha
        return full

    k = N // 2
    basis = _free_classes(cochain_complex(rel), k, lift)
    return pairing_matrix(pair.psi.component(0), basis, basis, k).tolist()


def _report(G, n) -> SignatureReport:
    if G is None:
        return SignatureReport(0, True, 0, ())
    forms.check_symmetric(G)
    form = tuple(tuple(int(x) for x in row) for row in G)
    if n % 4:
        return SignatureReport(0, True, len(form), form)
    return SignatureReport(forms.signature_of_form(G), False, len(form), form)


def signature_report(obj) -> SignatureReport:
    if isinstance(obj, SymmetricPair):
        return _report(pair_middle_form(obj), obj.dimension)
    return _report(middle_form(obj), obj.n)


def signature(obj) -> int:
    """Signature of the middle form; 0 (flagged in the report) unless the dimension is 4k."""
    return signature_report(obj).signature


def reversed_sapc(sc: SymmetricComplex) -> SymmetricComplex:
    """Same carrier with every structure component negated."""
    if sc.is_factored:
        a, b = sc.factors
        return product_sapc(reversed_sapc(a), b, materialize=False)
    comps = {s: -sc.structure.component(s) for s in sc.structure.components}
    structure = SymmetricStructure(sc.complex, sc.n, comps, sc.structure.window)
    return SymmetricComplex(
        sc.complex, structure, sc.n, sc.carrier, sc.certificate, sc.name + "~", sc.manifold, source=sc.source
    )


# -- products -------------------------------------------------------------------


def mix(x: TensorChain, y: TensorChain, P: ChainComplex) -> TensorChain:
    """(a⊗b)⊗(a'⊗b') ↦ (−1)^{|b||a'|} (a⊗a')⊗(b⊗b') into (A⊗B)⊗(A⊗B), P = A⊗B."""
    B = y.left
    offs = {(p, q): s for blocks in P.tensor_blocks.values() for p, q, s in blocks}
    deg = x.degree + y.degree
    acc = {}
    for p, mx in x.blocks.items():
        qa = x.degree - p
        cx = mx.tocoo()
        for r, my in y.blocks.items():
            qb = y.degree - r
            cy = my.tocoo()
            left = offs[(p, r)] + cx.row[:, None] * B.rank(r) + cy.row[None, :]
            right = offs[(qa, qb)] + cx.col[:, None] * B.rank(qb) + cy.col[None, :]
            vals = _sign(qa * r) * cx.data[:, None] * cy.data[None, :]
            rows, cols, data = acc.setdefault(p + r, ([], [], []))
            rows.append(left.ravel())
            cols.append(right.ravel())
            data.append(vals.ravel())
    blocks = {}
    for t, (rows, cols, data) in acc.items():
        shape = (P.rank(t), P.rank(deg - t))
        blocks[t] = sp.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=shape
        ).tocsr()
    return TensorChain(P, P, deg, blocks)


def product_components(a: SymmetricStructure, b: SymmetricStructure, P: ChainComplex, window):
    """Φ_s = Σ_{i+j=s} (−1)^{ij + i·m} mix(φ_i ⊗ T^i φ'_j) with m = dim b."""
    m = b.n
    comps = {}
    for s in range(window + 1):
        total = TensorChain.zero(P, P, a.n + b.n + s)
        for i in range(s + 1):
            j = s - i
            y = b.component(j)
            if i % 2:
                y = y.swap()
            total = total + _sign(i * j + i * m) * mix(a.component(i), y, P)
        comps[s] = total
    return comps


@lru_cache(maxsize=None)
def _interior_simplex(p, q):
    """A lattice path through the p×q grid: one interior simplex of the prism cell."""
    path, _ = next(iter(staircases(p, q)))
    return tuple(path)


def product_family(X: SimplicialComplex, Y: SimplicialComplex, P: SimplicialComplex, cap=20000) -> OpenFamily:
    """Opens of P generated by products St(v)×St(w) of vertex stars."""
    sx = X.star_masks
    sy = Y.star_masks
    xg = {s: X.gid(s) for s in X.all_simplices}
    yg = {t: Y.gid(t) for t in Y.all_simplices}
    proj = []
    for s in P.all_simplices:
        labs = [P.vertex_labels[v] for v in s]
        proj.append((xg[tuple(sorted({i for i, _ in labs}))], yg[tuple(sorted({j for _, j in labs}))]))
    seeds = []
    for v in X.simplices(0):
        for w in Y.simplices(0):
            gv, gw = X.gid(v), Y.gid(w)
            inside = [P.all_simplices[g] for g, (a, b) in enumerate(proj) if (sx[gv] >> a) & 1 and (sy[gw] >> b) & 1]
            seeds.append(inside)
    fam = OpenFamily(P, [], cap, "product-stars")
    for seed in seeds:
        m = 0
        for s in seed:
            m |= 1 << P.gid(s)
        fam.seed_opens.append(m)
    return fam


def _cell_gid(P, pos, sigma, tau):
    path = _interior_simplex(len(sigma) - 1, len(tau) - 1)
    return P.gid(tuple(sorted(pos[(sigma[i], tau[j])] for i, j in path)))


def tensor_local_system(Ca: LocalSystem, Cb: LocalSystem, P: SimplicialComplex, family: OpenFamily) -> LocalSystem:
    """C⊗D over the product family: a⊗b lies over the prism cell gen(a) × gen(b)."""
    X, Y = Ca.family.X, Cb.family.X
    pos = {lab: i for i, lab in enumerate(P.vertex_labels)}
    xs, ys = X.all_simplices, Y.all_simplices
    total = tensor_complex(Ca.total, Cb.total)
    gens, reach = {}, {}
    cache = {}

    def cell(g, h):
        key = (g, h)
        if key not in cache:
            cache[key] = _cell_gid(P, pos, xs[g], ys[h])
        return cache[key]

    for t, blocks in total.tensor_blocks.items():
        grow, rrow = [], []
        for p, q, _ in blocks:
            ga, gb = Ca.gens[p][:, 0], Cb.gens[q][:, 0]
            ra, rb = Ca.reach[p][:, 0], Cb.reach[q][:, 0]
            for i in range(len(ga)):
                for j in range(len(gb)):
                    grow.append([cell(int(ga[i]), int(gb[j]))])
                    rrow.append([cell(int(ra[i]), int(rb[j]))])
        gens[t], reach[t] = grow, rrow
    return LocalSystem(family, total, gens, reach, f"{Ca.name}x{Cb.name}")


def product_sapc(a, b, materialize=None, certify=False, cap=20000, jobs=1):
    """Product of symmetric complexes, or of a pair with a closed complex (either order).

    ``materialize=None`` builds the product chain complex when it has at most
    MATERIALIZE_LIMIT cells and keeps it factored otherwise.
    """
    if isinstance(a, SymmetricPair) or isinstance(b, SymmetricPair):
        return _product_pair(a, b)
    if a.is_factored or b.is_factored:
        raise HypothesisViolated("iterated factored products are not supported")
    size = a.complex.total_rank() * b.complex.total_rank()
    if materialize is None:
        materialize = size <= MATERIALIZE_LIMIT
    name = f"{a.name}x{b.name}"
    if not materialize:
        return SymmetricComplex(None, None, a.n + b.n, None, None, name, None, (a, b))
    P = tensor_complex(a.complex, b.complex)
    window = min(a.structure.window, b.structure.window)
    structure = SymmetricStructure(P, a.n + b.n, product_components(a.structure, b.structure, P, window), window)
    bad = structure.check()
    if bad:
        raise BoundaryError(f"product structure relations fail at s = {bad}")
    carrier = None
    if a.carrier is not None and b.carrier is not None and a.source is not None and b.source is not None:
        Xm, Ym = a.source, b.source
        PM = product_complex(Xm, Ym)
        family = product_family(Xm.base, Ym.base, PM.base, cap)
        carrier = tensor_local_system(a.carrier, b.carrier, PM.base, family)
        P = carrier.total
        structure = SymmetricStructure(P, a.n + b.n, product_components(a.structure, b.structure, P, window), window)
    sc = SymmetricComplex(P, structure, a.n + b.n, carrier, None, name, None, (a, b))
    if certify:
        ok, cert = is_nondegenerate(sc, cap=cap, jobs=jobs)
        sc.certificate = cert
        if not ok:
            raise NondegenerateCheckFailed(cert.failing())
    return sc


def _product_pair(a, b) -> SymmetricPair:
    """(pair) × (closed) or (closed) × (pair); the boundary inherits the product orientation sign."""
    pair_first = isinstance(a, SymmetricPair)
    pair, closed = (a, b) if pair_first else (b, a)
    if isinstance(closed, SymmetricPair):
        raise HypothesisViolated("a product of two pairs has corners")
    if closed.is_factored:
        raise HypothesisViolated("pair products need a materialized closed factor")
    window = min(pair.psi.window, closed.structure.window)
    C, D, E = pair.inclusion.source, pair.inclusion.target, closed.complex
    if pair_first:
        CB, DB = tensor_complex(C, E), tensor_complex(D, E)
        psi = product_components(pair.psi, closed.structure, DB, window)
        phi = product_components(pair.boundary_sc.structure, closed.structure, CB, window)
        f = _tensor_inclusion(pair.inclusion, ChainMap.identity(E), CB, DB)
        sign = 1
    else:
        CB, DB = tensor_complex(E, C), tensor_complex(E, D)
        psi = product_components(closed.structure, pair.psi, DB, window)
        phi = product_components(closed.structure, pair.boundary_sc.structure, CB, window)
        f = _tensor_inclusion(ChainMap.identity(E), pair.inclusion, CB, DB)
        sign = _sign(closed.n)
    n = pair.n + closed.n
    phi = {s: sign * v for s, v in phi.items()}
    boundary_sc = SymmetricComplex(CB, SymmetricStructure(CB, n, phi, window), n, name=f"boundary of {pair.name}x{closed.name}")
    out = SymmetricPair(f, boundary_sc, SymmetricStructure(DB, n + 1, psi, window), n, f"{a.name}x{b.name}")
    bad = out.boundary_defects()
    if bad:
        raise BoundaryError(f"product pair boundary equation fails at s = {bad}")
    return out


def _tensor_inclusion(f: ChainMap, g: ChainMap, S: ChainComplex, T: ChainComplex) -> ChainMap:
    comps = {}
    for t, blocks in S.tensor_blocks.items():
        where = {(p, q): s for p, q, s in T.tensor_blocks.get(t, [])}
        rows, cols, vals = [], [], []
        for p, q, start in blocks:
            m = sp.kron(f.component(p), g.component(q)).tocoo()
            rows.append(m.row + where[(p, q)])
            cols.append(m.col + start)
            vals.append(m.data)
        comps[t] = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(T.rank(t), S.rank(t))
        ).tocsc()
    return ChainMap(S, T, comps, check=False)


# -- factored products ---------------------------------------------------------------


def pairing_data(sc: SymmetricComplex):
    """Free cohomology classes per degree and the φ₀ pairings between complementary degrees."""
    if "pairings" not in sc._cache:
        basis = {p: _free_classes(sc.cochains, p) for p in range(sc.n + 1)}
        pair = {p: pairing_matrix(sc.phi0, basis[p], basis[sc.n - p], p) for p in range(sc.n + 1)}
        sc._cache["pairings"] = (basis, pair)
    return sc._cache["pairings"]


def factored_middle_form(sc: SymmetricComplex):
    """Middle form of A⊗B on cross products α×α' of free classes (a rational basis by Künneth).

    ((α×α')⊗(β×β'))(Φ₀) = (−1)^{|β||α'|} (α⊗β)(φ₀)·(α'⊗β')(φ'₀).
    """
    a, b = sc.factors
    n, m = a.n, b.n
    k = (n + m) // 2
    if "form" in sc._cache:
        return sc._cache["form"]
    ba, pa = pairing_data(a)
    bb, pb = pairing_data(b)
    index = [(p, k - p, i, j) for p in range(n + 1) if 0 <= k - p <= m for i in range(len(ba[p])) for j in range(len(bb[k - p]))]
    G = [[0] * len(index) for _ in index]
    for r, (p, q, i, j) in enumerate(index):
        for c, (p2, q2, i2, j2) in enumerate(index):
            if p + p2 != n or q + q2 != m:
                continue
            G[r][c] = _sign(p2 * q) * int(pa[p][i, i2]) * int(pb[q][j, j2])
    sc._cache["form"] = G
    return G
