"""Local systems over a finite lattice of opens and the verdicts built on them.

A local system assigns to every open U a subcomplex C(U) of one total chain
complex.  Free systems (guide objects and everything derived from them) are
stored by generators: basis element b lies in C(U) iff every generator of b
lies in U, so C(U∩V) = C(U)∩C(V) holds by construction.  A second list of
generators, the reach, describes the relative complexes C(X, X∖K_U) used by
the duality certificate: b survives iff some reach generator lies in U.

Guide objects are built on the barycentric subdivision by default.  A flag
σ₀ ⊂ … ⊂ σ_k of sd(Y) has generator f(σ₀) and reach f(σ_k).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .chaincore import ChainComplex, ChainMap, cochain_complex, tensor_complex, tensor_offsets, zero_matrix
from .equivariant import TensorChain, _assemble, _sign
from .errors import (
    CoverViolation,
    HypothesisViolated,
    InvalidLocalSystem,
    NotACycle,
    PosetTooLarge,
    ShapeMismatch,
    WindowTooNarrow,
)
from .homalg import group_dict, induced_map, map_is_iso, spmv
from .simplicial import OpenFamily, SimplicialMap, Subdivision, mask_to_bool


def _pad(rows, fill):
    width = max((len(r) for r in rows), default=0) or 1
    out = np.full((len(rows), width), fill, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


class LocalSystem:
    """Free local system: generators (and optional reach) per basis element."""

    def __init__(self, family, total: ChainComplex, gens, reach=None, name="", check=True):
        self.family = family
        self.total = total
        self.name = name
        N = family.size
        self._true, self._false = N, N + 1
        self.gens = {}
        self.reach = {} if reach is not None else None
        for k in total.degrees:
            r = total.rank(k)
            g = gens.get(k, [[]] * r)
            if len(g) != r:
                raise ShapeMismatch(f"{len(g)} generator lists for rank {r} in degree {k}")
            self.gens[k] = _pad(g, self._true)
            if reach is not None:
                self.reach[k] = _pad(reach.get(k, [[]] * r), self._false)
        self._cache = {}
        if check:
            self.check()

    # -- membership -------------------------------------------------------

    def _ext(self, U):
        b = mask_to_bool(U, self.family.size)
        return np.concatenate([b, [True, False]])

    def members(self, U):
        """Boolean mask per degree of the basis of C(U)."""
        ext = self._ext(U)
        return {k: ext[g].all(axis=1) for k, g in self.gens.items()}

    def member(self, k, i, U):
        return bool(self.members(U)[k][i])

    def survivors(self, U):
        """Basis of C(X, X∖K_U) per degree."""
        if self.reach is None:
            raise InvalidLocalSystem("this local system carries no relative structure")
        ext = self._ext(U)
        return {k: ext[r].any(axis=1) for k, r in self.reach.items()}

    def subcomplex(self, U):
        key = ("sub", U)
        if key not in self._cache:
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[key] = self.total.subcomplex(self.members(U))
        return self._cache[key]

    def relative(self, U):
        return self.total.quotient(self.survivors(U))

    def quotient_pair(self, U, K_open):
        """C(U)/C(K_open) for opens K_open ⊆ U (used with K_open = U∖K)."""
        a, b = self.members(U), self.members(K_open)
        return self.total.quotient({k: a[k] & ~b[k] for k in a})

    def minimal_open(self, k, i):
        m = 0
        for g in self.gens[k][i]:
            if g < self.family.size:
                m |= self._star(g)
        return m

    def _star(self, g):
        return self.family.X.star_masks[g]

    # -- invariants -------------------------------------------------------

    def check(self, opens=None):
        for k, g in self.gens.items():
            if g.shape[0] and (g == self._true).all(axis=1).any():
                raise InvalidLocalSystem(f"a degree-{k} basis element has no generator, so C(∅) ≠ 0")
        if opens is None:
            opens = self.family.basis()
        for U in opens:
            self._check_closed(self.members(U), f"C({self.family.label(U)})")
            if self.reach is not None:
                surv = self.survivors(U)
                self._check_closed({k: ~v for k, v in surv.items()}, "relative kernel")

    def _check_closed(self, mem, what):
        T = self.total
        for k in T.degrees:
            if k - 1 not in mem or not T.rank(k - 1):
                continue
            bad = T.boundary(k)[~mem[k - 1], :][:, mem[k]]
            if bad.count_nonzero():
                raise InvalidLocalSystem(f"{what} is not closed under the boundary in degree {k}")

    @classmethod
    def from_predicate(cls, family, total, member, opens=None, name=""):
        """Local system from a membership predicate member(k, i, U).

        The predicate is evaluated on every open of ``opens`` (the family's
        basis by default); it must be compatible with intersections.
        """
        if opens is None:
            opens = family.basis()
        opens = list(opens)
        if 0 not in opens:
            opens.append(0)
        full = family.full
        gens = {}
        for k in total.degrees:
            rows = []
            for i in range(total.rank(k)):
                inside = [U for U in opens if member(k, i, U)]
                if 0 in inside:
                    raise InvalidLocalSystem("C(∅) must be zero")
                minimal = full
                for U in inside:
                    minimal &= U
                for U in opens:
                    if member(k, i, U) != ((minimal & ~U) == 0):
                        raise InvalidLocalSystem(
                            f"member predicate is not compatible with intersections (degree {k}, element {i})"
                        )
                rows.append(family.minimal_elements(minimal) if minimal else [])
            gens[k] = rows
        return cls(family, total, gens, None, name)


# -- guide objects and pushforward ---------------------------------------------


def guide_object(f: SimplicialMap, family: OpenFamily, subdivide=True, name="guide") -> LocalSystem:
    """Simplices of Y whose image carrier lies in U, as a local system over X."""
    X = family.X
    if f.target is not X:
        raise ShapeMismatch("the map must land in the family's complex")
    Y = f.source
    if not subdivide:
        gens, reach = {}, {}
        for k in range(Y.dim + 1):
            rows = [[X.gid((v,)) for v in f.image(s)] for s in Y.simplices(k)]
            gens[k] = rows
            reach[k] = rows
        return LocalSystem(family, Y.chain_complex, gens, reach, name)
    sd = getattr(Y, "_subdivision", None)
    if sd is None:
        sd = Subdivision(Y)
        Y._subdivision = sd
    S = sd.sd
    img = f.image_gid
    gens, reach = {}, {}
    for k in range(S.dim + 1):
        flags = S.simplices(k)
        gens[k] = [[int(img[fl[0]])] for fl in flags]
        reach[k] = [[int(img[fl[-1]])] for fl in flags]
    return LocalSystem(family, S.chain_complex, gens, reach, name)


def pushforward(g: SimplicialMap, C: LocalSystem, family: OpenFamily) -> LocalSystem:
    """g_*C(U) = C(g⁻¹U): generators are pushed along g."""
    if g.source is not C.family.X or g.target is not family.X:
        raise ShapeMismatch("map does not match the families")
    img = np.append(g.image_gid, [family.size, family.size + 1])
    src_true, src_false = C._true, C._false
    remap = np.empty(C.family.size + 2, dtype=np.int64)
    remap[: C.family.size] = img[: C.family.size]
    remap[src_true] = family.size
    remap[src_false] = family.size + 1
    gens = {k: [list(remap[row]) for row in v] for k, v in C.gens.items()}
    reach = None if C.reach is None else {k: [list(remap[row]) for row in v] for k, v in C.reach.items()}
    out = LocalSystem(family, C.total, gens, reach, C.name + ".pushed", check=False)
    out.check()
    return out


def same_filtration(A: LocalSystem, B: LocalSystem, opens):
    """Label-exact equality of two local systems with the same total complex."""
    for U in opens:
        ma, mb = A.members(U), B.members(U)
        if any(not np.array_equal(ma[k], mb[k]) for k in ma):
            return False
    return True


# -- diagrams and their homotopy (co)limits -----------------------------------------


class PosetDiagram:
    """Finite poset with chain-complex values; F(q) → F(p) whenever p ≤ q."""

    def __init__(self, elements, less, values, maps):
        self.elements = list(elements)
        self.less = np.asarray(less, dtype=bool)
        self.values = list(values)
        self._maps = maps

    def map(self, q, p, k):
        """Matrix of F(q)_k → F(p)_k."""
        return self._maps(q, p, k)

    @classmethod
    def of_local_system(cls, C: LocalSystem, opens):
        """Opens ordered by reverse inclusion; values C(U) with inclusion maps."""
        opens = list(opens)
        n = len(opens)
        less = np.zeros((n, n), dtype=bool)
        for i, U in enumerate(opens):
            for j, V in enumerate(opens):
                if i != j and (V & ~U) == 0 and U != V:
                    less[i, j] = True
        subs = [C.subcomplex(U) for U in opens]
        return cls(opens, less, subs, _subcomplex_maps(C.total, subs))


def _local_index(total, sub):
    out = {}
    for k in total.degrees:
        loc = np.full(total.rank(k), -1, dtype=np.int64)
        idx = sub.parent_index.get(k, np.zeros(0, dtype=np.int64))
        loc[idx] = np.arange(len(idx))
        out[k] = loc
    return out


def _subcomplex_maps(total, subs):
    locs = [None] * len(subs)

    def maps(q, p, k):
        if locs[p] is None:
            locs[p] = _local_index(total, subs[p])
        src = subs[q].parent_index.get(k, np.zeros(0, dtype=np.int64))
        rows = locs[p][k][src] if k in locs[p] else np.zeros(0, dtype=np.int64)
        if np.any(rows < 0):
            raise InvalidLocalSystem("diagram value is not contained in the value below it")
        return sp.csc_matrix(
            (np.ones(len(src), dtype=np.int64), (rows, np.arange(len(src)))),
            shape=(subs[p].rank(k), subs[q].rank(k)),
        )

    return maps


def nerve_chains(less, max_len, cap=None, starts=None):
    """Strictly increasing chains (as index tuples) with at most max_len + 1 elements."""
    n = less.shape[0]
    above = [np.flatnonzero(less[i]).tolist() for i in range(n)]
    out = []
    stack = [(i,) for i in (range(n) if starts is None else starts)]
    while stack:
        c = stack.pop()
        out.append(c)
        if cap is not None and len(out) > cap:
            raise PosetTooLarge(len(out), cap, "nerve")
        if len(c) <= max_len:
            for j in above[c[-1]]:
                stack.append(c + (j,))
    out.sort(key=lambda c: (len(c), c))
    return out


class _Totalization:
    """Total complex of the (co)simplicial replacement over the nerve, in a degree range."""

    def __init__(self, D: PosetDiagram, kind, degrees, cap=None):
        self.D = D
        self.kind = kind
        vals = [v for v in D.values if v.total_rank()]
        lo = min((v.lo for v in vals), default=0)
        hi = max((v.hi for v in vals), default=-1)
        height = self._height()
        if degrees is None:
            if kind == "holim":
                a, b = lo - height, hi
            else:
                a, b = lo, hi + height
            self.exact = True
        else:
            a, b = degrees
            self.exact = False
        self.certified = (a, b)
        self.range = (a - 1, b + 1)
        nonzero = [i for i, v in enumerate(D.values) if v.total_rank()]
        if kind == "holim":
            max_k = min(height, hi - (a - 2))
            self.chains = nerve_chains(D.less, max(max_k, 0), cap, nonzero)
        else:
            max_k = min(height, (b + 2) - lo)
            rev = nerve_chains(D.less.T, max(max_k, 0), cap, nonzero)
            self.chains = sorted((c[::-1] for c in rev), key=lambda c: (len(c), c))
        self.layout = {m: self._layout(m) for m in range(a - 2, b + 3)}
        ranks = {m: self._size(m) for m in range(a - 1, b + 2)}
        bds = {m: self._differential(m) for m in range(a, b + 2)}
        self.complex = ChainComplex(ranks, bds, check=True)

    def _height(self):
        less = self.D.less
        # predecessor counts strictly increase along the order, so this is a topological order
        order = np.argsort(less.sum(axis=0), kind="stable")
        depth = np.zeros(less.shape[0], dtype=np.int64)
        for i in order.tolist():
            succ = np.flatnonzero(less[i])
            if len(succ):
                depth[succ] = np.maximum(depth[succ], depth[i] + 1)
        return int(depth.max()) if len(depth) else 0

    def _value(self, c):
        return self.D.values[c[0] if self.kind == "holim" else c[-1]]

    def _inner(self, m, c):
        k = len(c) - 1
        return m + k if self.kind == "holim" else m - k

    def _layout(self, m):
        out, pos = [], 0
        for c in self.chains:
            r = self._value(c).rank(self._inner(m, c))
            if r:
                out.append((c, pos, r))
                pos += r
        return out

    def _size(self, m):
        lay = self.layout[m]
        return lay[-1][1] + lay[-1][2] if lay else 0

    def _differential(self, m):
        src, dst = self.layout[m], self.layout[m - 1]
        rows_n, cols_n = self._size(m - 1), self._size(m)
        if not rows_n or not cols_n:
            return zero_matrix(rows_n, cols_n)
        where = {c: pos for c, pos, _ in dst}
        less = self.D.less
        n = less.shape[0]
        blocks = []
        for c, pos, size in src:
            k = len(c) - 1
            inner = self._inner(m, c)
            V = self._value(c)
            if self.kind == "holim":
                # D = ∂ + (−1)^m δ with δ = Σ (−1)^i d^i into chains one longer
                if c in where and V.rank(inner - 1):
                    blocks.append((where[c], pos, V.boundary(inner)))
                eps = _sign(m)
                for i in range(k + 2):
                    lo_ok = less[c[i - 1]] if i > 0 else np.ones(n, dtype=bool)
                    hi_ok = less[:, c[i]] if i <= k else np.ones(n, dtype=bool)
                    for e in np.flatnonzero(lo_ok & hi_ok).tolist():
                        c2 = c[:i] + (e,) + c[i:]
                        if c2 not in where:
                            continue
                        if i == 0:
                            mat = self.D.map(c[0], e, inner)
                        else:
                            mat = sp.identity(size, dtype=np.int64, format="csc")
                        blocks.append((where[c2], pos, eps * _sign(i) * mat))
            else:
                # D = Σ (−1)^i d_i + (−1)^k ∂
                if c in where and V.rank(inner - 1):
                    blocks.append((where[c], pos, _sign(k) * V.boundary(inner)))
                for i in range(k + 1) if k > 0 else ():
                    c2 = c[:i] + c[i + 1:]
                    if c2 not in where:
                        continue
                    if i == k:
                        mat = self.D.map(c[-1], c[-2], inner)
                    else:
                        mat = sp.identity(size, dtype=np.int64, format="csc")
                    blocks.append((where[c2], pos, _sign(i) * mat))
        return _assemble(blocks, rows_n, cols_n)

    def homology(self, k):
        a, b = self.certified
        if not (a <= k <= b):
            raise WindowTooNarrow(f"degree {k} is outside the certified window [{a}, {b}]")
        return self.complex.homology(k)

    def component(self, vec, chain, m):
        for c, pos, size in self.layout[m]:
            if c == chain:
                return np.asarray(vec)[pos: pos + size]
        return None


class HolimWindow(_Totalization):
    def __init__(self, D, degrees=None, limit=None, cap=None):
        super().__init__(D, "holim", degrees, cap)
        self.comparison = None
        if limit is not None:
            L, legs = limit
            self.comparison = self._cone_map(L, legs)

    def _cone_map(self, L, legs):
        comps = {}
        for m in range(self.range[0], self.range[1] + 1):
            blocks = []
            for c, pos, _ in self.layout[m]:
                if len(c) == 1 and L.rank(m):
                    blocks.append((pos, 0, legs(c[0], m)))
            comps[m] = _assemble(blocks, self._size(m), L.rank(m))
        lo, hi = self.range
        Lw = _truncate(L, lo, hi)
        return ChainMap(Lw, self.complex, comps, check=False)


class HocolimWindow(_Totalization):
    def __init__(self, D, degrees=None, colimit=None, cap=None):
        super().__init__(D, "hocolim", degrees, cap)
        self.comparison = None
        if colimit is not None:
            R, legs = colimit
            comps = {}
            for m in range(self.range[0], self.range[1] + 1):
                blocks = []
                for c, pos, _ in self.layout[m]:
                    if len(c) == 1 and R.rank(m):
                        blocks.append((0, pos, legs(c[0], m)))
                comps[m] = _assemble(blocks, R.rank(m), self._size(m))
            self.comparison = ChainMap(self.complex, _truncate(R, *self.range), comps, check=False)


def _truncate(C, lo, hi):
    ranks = {k: C.rank(k) for k in range(lo, hi + 1)}
    bds = {k: C.boundary(k) for k in range(lo + 1, hi + 1) if C.rank(k) and C.rank(k - 1)}
    return ChainComplex(ranks, bds, check=False)


def holim_poset(D: PosetDiagram, window=None, limit=None, cap=None) -> HolimWindow:
    return HolimWindow(D, _window_range(window), limit, cap)


def hocolim_poset(D: PosetDiagram, window=None, colimit=None, cap=None) -> HocolimWindow:
    return HocolimWindow(D, _window_range(window), colimit, cap)


def _window_range(window):
    if window is None:
        return None
    if isinstance(window, int):
        return (window - 1, window + 1)
    a, b = window
    return (int(a), int(b))


def window_quasi_iso(f: ChainMap, degrees):
    """Per-degree homology isomorphism test for a map of (truncated) complexes."""
    verdict = {}
    for k in degrees:
        src, dst, M = induced_map(f, k)
        verdict[k] = map_is_iso(src, dst, M)
    return verdict


# -- descent ---------------------------------------------------------------------


def descent_check(C: LocalSystem, W, mode="codescent", cap=None):
    """Compare C(∩W) with holim over W (descent) or hocolim over W with C(∪W) (codescent)."""
    W = sorted(set(W), key=lambda m: (bin(m).count("1"), m))
    if not W:
        raise HypothesisViolated("empty collection of opens")
    wset = set(W)
    if mode == "descent":
        if any((a | b) not in wset for a in W for b in W):
            raise HypothesisViolated("descent needs a collection closed under unions")
        target = W[0]
        for U in W:
            target &= U
    elif mode == "codescent":
        if any((a & b) not in wset for a in W for b in W):
            raise HypothesisViolated("codescent needs a collection closed under intersections")
        target = 0
        for U in W:
            target |= U
    else:
        raise ValueError("mode must be 'descent' or 'codescent'")
    diag = PosetDiagram.of_local_system(C, W)
    T = C.subcomplex(target)
    subs = diag.values
    locT = _local_index(C.total, T)
    total = C.total

    def leg_into(p, m):
        # C(∩W) → C(U_p)
        loc = _local_index(total, subs[p])[m]
        src = T.parent_index.get(m, np.zeros(0, dtype=np.int64))
        return sp.csc_matrix(
            (np.ones(len(src), dtype=np.int64), (loc[src], np.arange(len(src)))), shape=(subs[p].rank(m), T.rank(m))
        )

    def leg_out(p, m):
        src = subs[p].parent_index.get(m, np.zeros(0, dtype=np.int64))
        return sp.csc_matrix(
            (np.ones(len(src), dtype=np.int64), (locT[m][src], np.arange(len(src)))),
            shape=(T.rank(m), subs[p].rank(m)),
        )

    if mode == "descent":
        H = holim_poset(diag, None, (T, leg_into), cap)
    else:
        H = hocolim_poset(diag, None, (T, leg_out), cap)
    degrees = list(range(H.certified[0], H.certified[1] + 1))
    verdict = window_quasi_iso(H.comparison, degrees)
    return {
        "mode": mode,
        "opens": [C.family.label(U) for U in W],
        "target": C.family.label(target),
        "degrees": [
            {
                "k": k,
                "comparison": T.homology(k).as_dict(),
                "homotopy": H.complex.homology(k).as_dict(),
                "iso": verdict[k],
            }
            for k in degrees
        ],
        "overall": all(verdict.values()),
    }


# -- economy box product ---------------------------------------------------------


class BoxEconomy:
    """Holim over triples (U, K₁, K₂) of C(U, U∖K₁)⊗D(U, U∖K₂), in a degree window.

    K ranges over ``closed`` (bitmasks of closed subcomplexes of X); the order
    is (U, K₁, K₂) ≤ (U', K₁', K₂') iff U ⊇ U' and K_i ⊆ K_i', matching the
    variance of the values.
    """

    def __init__(self, C: LocalSystem, D: LocalSystem, n: int, window=1, opens=None, closed=None, cap=20000):
        if C.family is not D.family:
            raise ShapeMismatch("box product needs a shared family")
        if window < 0:
            raise WindowTooNarrow("window must be nonnegative")
        fam = C.family
        self.C, self.D, self.n, self.window = C, D, int(n), int(window)
        opens = list(fam.basis() if opens is None else opens)
        if closed is None:
            closed = default_closed_sets(fam)
        closed = sorted(set(closed), key=lambda m: (bin(m).count("1"), m))
        triples = []
        for U in opens:
            for K1 in closed:
                for K2 in closed:
                    if (K1 & K2) & ~U == 0:
                        triples.append((U, K1, K2))
                        if len(triples) > cap:
                            raise PosetTooLarge(len(triples), cap, "(U, K1, K2) poset")
        self.triples = triples
        self.index = {t: i for i, t in enumerate(triples)}
        m = len(triples)
        less = np.zeros((m, m), dtype=bool)
        arr = triples
        for i, (U, K1, K2) in enumerate(arr):
            for j, (V, L1, L2) in enumerate(arr):
                if i != j and (V & ~U) == 0 and (K1 & ~L1) == 0 and (K2 & ~L2) == 0:
                    less[i, j] = True
        self._factors = {}
        self._proj_cache = {}
        self._value_list = [self._value(t) for t in triples]
        diag = PosetDiagram(triples, less, self._value_list, self._map)
        self.tot = HolimWindow(diag, (self.n - self.window, self.n + self.window), cap=cap)
        self.complex = self.tot.complex
        self.symmetric = C is D
        self.tau = self._tau() if self.symmetric else None

    def _factor(self, S, U, K):
        key = (id(S), U, K)
        if key not in self._factors:
            a = S.members(U)
            b = S.members(U & ~K)
            self._factors[key] = S.total.quotient({k: a[k] & ~b[k] for k in a})
        return self._factors[key]

    def _value(self, t):
        U, K1, K2 = t
        A, B = self._factor(self.C, U, K1), self._factor(self.D, U, K2)
        out = tensor_complex(A, B)
        out._factors = (A, B)
        return out

    def _map(self, q, p, k):
        Vq, Vp = self._value_list[q], self._value_list[p]
        (Aq, Bq), (Ap, Bp) = Vq._factors, Vp._factors
        key = (q, p)
        if key not in self._proj_cache:
            self._proj_cache[key] = (_proj(self.C.total, Aq, Ap), _proj(self.D.total, Bq, Bp))
        f, g = self._proj_cache[key]
        return _tensor_map_matrix(Vq, Vp, f, g, k)

    def homology(self, k):
        return self.tot.homology(k)

    def specialization(self):
        """Projection of the window onto the (X, X, X) coordinate C(X)⊗D(X)."""
        fam = self.C.family
        t = (fam.full, fam.full, fam.full)
        if t not in self.index:
            raise ShapeMismatch("(X, X, X) is not among the triples")
        i = self.index[t]
        V = self.tot.D.values[i]
        comps = {}
        for m in range(self.tot.range[0], self.tot.range[1] + 1):
            blocks = []
            for c, pos, _ in self.tot.layout[m]:
                if c == (i,) and V.rank(m):
                    blocks.append((0, pos, sp.identity(V.rank(m), dtype=np.int64, format="csc")))
            comps[m] = _assemble(blocks, V.rank(m), self.tot._size(m))
        return ChainMap(self.complex, _truncate(V, *self.tot.range), comps, check=False)

    def _tau(self):
        tot = self.tot
        swap_idx = [self.index[(U, K2, K1)] for (U, K1, K2) in self.triples]
        comps = {}
        for m in range(tot.range[0], tot.range[1] + 1):
            where = {c: pos for c, pos, _ in tot.layout[m]}
            blocks = []
            for c, pos, size in tot.layout[m]:
                c2 = tuple(swap_idx[x] for x in c)
                inner = tot._inner(m, c)
                Vs, Vt = tot.D.values[c[0]], tot.D.values[c2[0]]
                blocks.append((where[c2], pos, _swap_matrix(Vs, Vt, inner)))
            comps[m] = _assemble(blocks, tot._size(m), tot._size(m))
        return ChainMap(self.complex, self.complex, comps, check=False)

    def check_tau(self):
        """τ² = id and τ commutes with the differential on the window."""
        if self.tau is None:
            return True
        C = self.complex
        for m in C.degrees:
            t = self.tau.component(m)
            if (t @ t - sp.identity(C.rank(m), dtype=np.int64)).count_nonzero():
                return False
            if C.rank(m - 1) and (C.boundary(m) @ t - self.tau.component(m - 1) @ C.boundary(m)).count_nonzero():
                return False
        return True


def _proj(total, S, T):
    """Matrices (per degree) of the induced map between two subquotients of ``total``."""
    out = {}
    for k in total.degrees:
        src = S.parent_index.get(k, np.zeros(0, dtype=np.int64))
        dst = T.parent_index.get(k, np.zeros(0, dtype=np.int64))
        loc = np.full(total.rank(k), -1, dtype=np.int64)
        loc[dst] = np.arange(len(dst))
        rows = loc[src]
        keep = rows >= 0
        out[k] = sp.csc_matrix(
            (np.ones(int(keep.sum()), dtype=np.int64), (rows[keep], np.flatnonzero(keep))), shape=(len(dst), len(src))
        )
    return out


def _tensor_map_matrix(Vs, Vt, f, g, m):
    """(f⊗g) in total degree m between two tensor complexes with block layouts."""
    (As, Bs), (At, Bt) = Vs._factors, Vt._factors
    src = tensor_offsets(As, Bs).get(m, [])
    dst = {(p, q): s for p, q, s in tensor_offsets(At, Bt).get(m, [])}
    blocks = []
    for p, q, start in src:
        if (p, q) not in dst:
            continue
        fp, gq = f.get(p), g.get(q)
        if fp is None or gq is None:
            continue
        blocks.append((dst[(p, q)], start, sp.kron(fp, gq, format="csc")))
    return _assemble(blocks, Vt.rank(m), Vs.rank(m))


def _swap_matrix(Vs, Vt, m):
    """a⊗b ↦ (−1)^{|a||b|} b⊗a from A⊗B (layout of Vs) to B⊗A (layout of Vt)."""
    (A, B), (B2, A2) = Vs._factors, Vt._factors
    src = tensor_offsets(A, B).get(m, [])
    dst = {(p, q): s for p, q, s in tensor_offsets(B2, A2).get(m, [])}
    rows, cols, vals = [], [], []
    for p, q, start in src:
        rp, rq = A.rank(p), B.rank(q)
        i = np.repeat(np.arange(rp), rq)
        j = np.tile(np.arange(rq), rp)
        rows.append(dst[(q, p)] + j * rp + i)
        cols.append(start + i * rq + j)
        vals.append(np.full(rp * rq, _sign(p * q), dtype=np.int64))
    if not rows:
        return zero_matrix(Vt.rank(m), Vs.rank(m))
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(Vt.rank(m), Vs.rank(m))
    ).tocsc()


def default_closed_sets(family: OpenFamily):
    """∅, the closed simplices of X, and X itself."""
    X = family.X
    return [0] + list(X.closure_masks) + [family.full]


def core_closed_sets(family: OpenFamily, opens):
    """∅, the largest closed subcomplex of each open, and X."""
    return [0] + [family.max_closed_subcomplex_in(U) for U in opens] + [family.full]


def box_economy(C, D, n, window=1, opens=None, closed=None, cap=20000) -> BoxEconomy:
    return BoxEconomy(C, D, n, window, opens, closed, cap)


# -- slant products and duality certificates ------------------------------------------


@dataclass
class DualityCertificate:
    dimension: int
    coverage: str
    entries: list = field(default_factory=list)
    lattice_size: int | None = None

    @property
    def overall(self):
        return all(e["overall"] for e in self.entries)

    def failing(self):
        return [e["open"] for e in self.entries if not e["overall"]]

    def as_dict(self):
        return {
            "dimension": self.dimension,
            "coverage": self.coverage,
            "lattice_size": self.lattice_size,
            "opens": len(self.entries),
            "perOpen": self.entries,
            "overall": self.overall,
        }


def _check_cycle(lam: TensorChain):
    if not lam.boundary().is_zero():
        raise NotACycle("λ is not a cycle")


def slant_duality(C: LocalSystem, D: LocalSystem, lam: TensorChain, U: int, check_cycle=True):
    """Slant with λ: H^{n−j} C(X, X∖K_U) → H_j D(U) for every j, with verdicts."""
    if lam.left is not C.total or lam.right is not D.total:
        raise ShapeMismatch("λ must live in C(X)⊗D(X)")
    if check_cycle:
        _check_cycle(lam)
    n = lam.degree
    rel = C.relative(U)
    sub = D.subcomplex(U)
    cochains = cochain_complex(rel)
    sub_loc = _local_index(D.total, sub)
    degrees = []
    for j in range(0, n + 1):
        p = n - j
        src_orders = cochains.engine.order(-p) if cochains.rank(-p) else []
        dst_orders = sub.engine.order(j) if sub.rank(j) else []
        cols = []
        if src_orders:
            reps = cochains.engine.representatives(-p)
            parent = rel.parent_index[p]
            for alpha in reps:
                full = np.zeros(C.total.rank(p), dtype=alpha.dtype if alpha.dtype == object else np.int64)
                full[parent] = alpha
                if full.dtype == object:
                    full = np.array([int(x) for x in full], dtype=np.int64)
                image = lam.slant(p, full)
                nz = np.flatnonzero(image)
                local = sub_loc[j][nz] if len(nz) else nz
                if len(nz) and np.any(local < 0):
                    raise InvalidLocalSystem("slant of a relative cocycle leaves D(U)")
                vec = np.zeros(sub.rank(j), dtype=np.int64)
                vec[local] = image[nz]
                cols.append(sub.engine.coordinates(j, vec) if dst_orders else [])
        M = [[cols[c][r] for c in range(len(cols))] for r in range(len(dst_orders))]
        iso = map_is_iso(src_orders, dst_orders, M)
        degrees.append({"j": j, "source": group_dict(src_orders), "target": group_dict(dst_orders), "iso": iso})
    return {"open": C.family.label(U), "degrees": degrees, "overall": all(d["iso"] for d in degrees)}


_WORKER = {}


def _worker_entry(U):
    C, D, lam = _WORKER["args"]
    return slant_duality(C, D, lam, U, check_cycle=False)


def duality_certificate(C: LocalSystem, D: LocalSystem, lam: TensorChain, opens=None, cap=None, jobs=1, spot_checks=0, seed=0):
    """Certificate over every open of the lattice if it fits under the cap, else the meet-closed basis.

    Basis coverage still decides every open for free systems with a single
    generator and a single reach element per basis element: C(U∪V) =
    C(U)+C(V) on both sides, so Mayer–Vietoris sequences and the five lemma
    carry the verdict from U, V and U∩V to U∪V, and every open is a union of
    basis opens whose pairwise meets are again such unions.
    """
    _check_cycle(lam)
    fam = C.family
    if opens is None:
        coverage, opens = fam.opens_for_certificate(cap)
        if coverage == "basis" and spot_checks:
            opens = list(opens) + random_unions(fam, spot_checks, seed)
            coverage = "basis+unions"
    else:
        coverage = "custom"
    cert = DualityCertificate(lam.degree, coverage)
    if coverage == "lattice":
        cert.lattice_size = len(opens)
    elif coverage.startswith("basis"):
        cert.lattice_size = fam.count_opens()
    if jobs > 1 and len(opens) > 1:
        _WORKER["args"] = (C, D, lam)
        import multiprocessing as mp

        with ProcessPoolExecutor(max_workers=jobs, mp_context=mp.get_context("fork")) as ex:
            cert.entries = list(ex.map(_worker_entry, opens, chunksize=max(1, len(opens) // (4 * jobs))))
        _WORKER.clear()
    else:
        cert.entries = [slant_duality(C, D, lam, U, check_cycle=False) for U in opens]
    return cert


def random_unions(family: OpenFamily, count, seed=0, max_parts=3):
    """Distinct unions of 2..max_parts random basis opens (deterministic for a seed)."""
    rng = np.random.default_rng(seed)
    basis = [U for U in family.basis() if U not in (0, family.full)]
    out = []
    seen = set(family.basis())
    tries = 0
    while len(out) < count and basis and tries < 50 * count:
        tries += 1
        k = int(rng.integers(2, max_parts + 1))
        pick = rng.choice(len(basis), size=min(k, len(basis)), replace=False)
        U = 0
        for i in pick:
            U |= basis[int(i)]
        if U not in seen:
            seen.add(U)
            out.append(U)
    return out


# -- excision ------------------------------------------------------------------


def excision_square_check(C: LocalSystem, U: int, V: int):
    """Mayer–Vietoris exactness, homotopy-pushout verdict and the relative quotient map."""
    fam = C.family
    if (U | V) != fam.full:
        raise CoverViolation("U ∪ V must be all of X")
    T = C.total
    CU, CV, CI, CX = (C.subcomplex(W) for W in (U, V, U & V, fam.full))
    # 0 → C(U∩V) → C(U)⊕C(V) → C(X) → 0 as a three-column double complex
    f_u = _proj(T, CI, CU)
    f_v = _proj(T, CI, CV)
    g_u = _proj(T, CU, CX)
    g_v = _proj(T, CV, CX)
    lo, hi = T.lo, T.hi
    ranks, bds = {}, {}
    for k in range(lo, hi + 3):
        ranks[k] = CX.rank(k) + CU.rank(k - 1) + CV.rank(k - 1) + CI.rank(k - 2)
    for k in range(lo + 1, hi + 3):
        rx, ru, rv, ri = CX.rank(k), CU.rank(k - 1), CV.rank(k - 1), CI.rank(k - 2)
        tx, tu, tv, ti = CX.rank(k - 1), CU.rank(k - 2), CV.rank(k - 2), CI.rank(k - 3)
        blocks = []
        ox, ou, ov, oi = 0, rx, rx + ru, rx + ru + rv
        px, pu, pv, pi_ = 0, tx, tx + tu, tx + tu + tv
        if rx and tx:
            blocks.append((px, ox, CX.boundary(k)))
        if ru:
            if tx:
                blocks.append((px, ou, g_u[k - 1]))
            if tu:
                blocks.append((pu, ou, -CU.boundary(k - 1)))
        if rv:
            if tx:
                blocks.append((px, ov, -g_v[k - 1]))
            if tv:
                blocks.append((pv, ov, -CV.boundary(k - 1)))
        if ri:
            if tu:
                blocks.append((pu, oi, f_u[k - 2]))
            if tv:
                blocks.append((pv, oi, f_v[k - 2]))
            if ti:
                blocks.append((pi_, oi, CI.boundary(k - 2)))
        bds[k] = _assemble(blocks, ranks[k - 1], ranks[k])
    total_mv = ChainComplex(ranks, bds)
    exact = {k: total_mv.homology(k + 2).is_zero and total_mv.homology(k + 1).is_zero for k in range(lo, hi + 1)}
    # homotopy pushout: cone(C(U∩V) → C(U)) → cone(C(V) → C(X))
    from .chaincore import is_quasi_iso, mapping_cone

    cone1 = mapping_cone(ChainMap(CI, CU, f_u, check=False))
    cone2 = mapping_cone(ChainMap(CV, CX, g_v, check=False))
    comps = {}
    for k in range(lo, hi + 2):
        top = sp.hstack([g_u[k] if CU.rank(k) else zero_matrix(CX.rank(k), 0),
                         zero_matrix(CX.rank(k), CI.rank(k - 1))]) if CX.rank(k) else None
        bottom = sp.hstack([zero_matrix(CV.rank(k - 1), CU.rank(k)), f_v[k - 1] if CI.rank(k - 1) else zero_matrix(CV.rank(k - 1), 0)]) if CV.rank(k - 1) else None
        parts = [b for b in (top, bottom) if b is not None]
        if parts:
            comps[k] = sp.vstack(parts).tocsc()
    square = ChainMap(cone1, cone2, comps)
    pushout = is_quasi_iso(square)
    # C(U)/C(U∩V) → C(X)/C(V)
    mu, mi, mx, mv = (C.members(W) for W in (U, U & V, fam.full, V))
    QU = T.quotient({k: mu[k] & ~mi[k] for k in mu})
    QX = T.quotient({k: mx[k] & ~mv[k] for k in mx})
    q = ChainMap(QU, QX, _proj(T, QU, QX))
    connecting = _connecting_map(T, CX, CU, CV, CI, lo, hi)
    return {
        "U": fam.label(U),
        "V": fam.label(V),
        "exact": {int(k): bool(v) for k, v in exact.items()},
        "mayer_vietoris_exact": all(exact.values()),
        "homology": {
            name: [S.homology(k).as_dict() for k in range(lo, hi + 1)]
            for name, S in (("intersection", CI), ("U", CU), ("V", CV), ("X", CX))
        },
        "connecting": connecting,
        "pushout": bool(pushout),
        "relative_quasi_iso": bool(is_quasi_iso(q)),
        "overall": bool(all(exact.values()) and pushout and is_quasi_iso(q)),
    }


def _connecting_map(T, CX, CU, CV, CI, lo, hi):
    """∂: H_k(X) → H_{k−1}(U∩V), computed by splitting cycles as a + b."""
    out = {}
    locU = _local_index(T, CU)
    locI = _local_index(T, CI)
    for k in range(lo + 1, hi + 1):
        if not CX.rank(k) or not CX.engine.order(k):
            continue
        cols = []
        ok = True
        for z in CX.engine.representatives(k):
            zfull = np.zeros(T.rank(k), dtype=object if z.dtype == object else np.int64)
            zfull[CX.parent_index[k]] = z
            a = np.zeros_like(zfull)
            inU = np.zeros(T.rank(k), dtype=bool)
            inU[CU.parent_index.get(k, [])] = True
            a[inU] = zfull[inU]
            rest = zfull.copy()
            rest[inU] = 0
            inV = np.zeros(T.rank(k), dtype=bool)
            inV[CV.parent_index.get(k, [])] = True
            if np.any(rest[~inV]):
                ok = False
                break
            da = spmv(T.boundary(k), a)
            nz = np.flatnonzero(da)
            if np.any(locI[k - 1][nz] < 0):
                ok = False
                break
            vec = np.zeros(CI.rank(k - 1), dtype=da.dtype)
            vec[locI[k - 1][nz]] = da[nz]
            cols.append(CI.engine.coordinates(k - 1, vec) if CI.rank(k - 1) and CI.engine.order(k - 1) else [])
        if not ok:
            out[k] = None
            continue
        rows = len(CI.engine.order(k - 1)) if CI.rank(k - 1) else 0
        out[k] = [[int(cols[c][r]) for c in range(len(cols))] for r in range(rows)]
    del locU
    return out
