"""ℤ/2-equivariant chain algebra: Steenrod diagonals, W, fixed points and orbits.

Conventions
-----------
* T(a⊗b) = (−1)^{|a||b|} b⊗a on a tensor square.
* W is the periodic resolution with one ℤ[ℤ/2] generator e_s per degree and
  d e_s = (1 + (−1)^s T) e_{s−1}.
* Homotopy fixed points: an element of degree m is a list f_s ∈ D_{m+s},
  (df)_s = ∂f_s − (−1)^m (1 + (−1)^s T) f_{s−1}.
* Homotopy orbits: degree m is ⊕_s e_s⊗D_{m−s},
  d(e_s⊗x) = e_{s−1}⊗(1 + (−1)^s T)x + (−1)^s e_s⊗∂x.
* Steenrod diagonals satisfy ∂Δ_s − (−1)^s Δ_s ∂ = (1 + (−1)^s T) Δ_{s−1},
  and a closed n-manifold gets φ_s = (−1)^{ns} Δ_s(ω), so that (φ_s) is an
  n-cycle of fixed points.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .chaincore import ChainComplex, ChainMap, as_sparse, tensor_complex, tensor_offsets, zero_matrix
from .errors import BoundaryError, ShapeMismatch, UnboundedComplex


def _sign(k):
    return -1 if k % 2 else 1


# -- tensor chains --------------------------------------------------------------


class TensorChain:
    """Homogeneous element of L⊗R, stored per bidegree as a sparse coefficient matrix.

    Block p holds M with x = Σ M[i, j] a_i⊗b_j, a_i ∈ L_p, b_j ∈ R_{degree−p}.
    Nothing here materializes L⊗R, so this scales to complexes whose tensor
    square is far too large to build.
    """

    __slots__ = ("left", "right", "degree", "blocks")

    def __init__(self, left: ChainComplex, right: ChainComplex, degree: int, blocks=None):
        self.left = left
        self.right = right
        self.degree = int(degree)
        self.blocks = {}
        for p, m in (blocks or {}).items():
            shape = (left.rank(p), right.rank(self.degree - p))
            if 0 in shape:
                continue
            m = sp.csr_matrix(m, dtype=np.int64) if sp.issparse(m) else sp.csr_matrix(np.asarray(m, dtype=np.int64))
            if m.shape != shape:
                raise ShapeMismatch(f"block {p} has shape {m.shape}, expected {shape}")
            m.eliminate_zeros()
            if m.nnz:
                self.blocks[int(p)] = m

    @classmethod
    def from_terms(cls, left, right, degree, terms):
        """terms: iterable of (p, i, j, coefficient)."""
        acc = {}
        for p, i, j, c in terms:
            acc.setdefault(p, ([], [], []))
            r, cl, v = acc[p]
            r.append(i)
            cl.append(j)
            v.append(c)
        blocks = {}
        for p, (r, cl, v) in acc.items():
            shape = (left.rank(p), right.rank(degree - p))
            blocks[p] = sp.coo_matrix((v, (r, cl)), shape=shape, dtype=np.int64).tocsr()
        return cls(left, right, degree, blocks)

    @classmethod
    def zero(cls, left, right, degree):
        return cls(left, right, degree)

    def block(self, p):
        m = self.blocks.get(p)
        if m is None:
            return sp.csr_matrix((self.left.rank(p), self.right.rank(self.degree - p)), dtype=np.int64)
        return m

    def _same_space(self, other):
        if other.left is not self.left or other.right is not self.right or other.degree != self.degree:
            raise ShapeMismatch("tensor chains live in different groups")

    def __add__(self, other):
        self._same_space(other)
        keys = set(self.blocks) | set(other.blocks)
        return TensorChain(self.left, self.right, self.degree, {p: self.block(p) + other.block(p) for p in keys})

    def __neg__(self):
        return TensorChain(self.left, self.right, self.degree, {p: -m for p, m in self.blocks.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        k = int(k)
        return TensorChain(self.left, self.right, self.degree, {p: k * m for p, m in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorChain):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except ShapeMismatch:
            return False

    __hash__ = None

    def is_zero(self):
        return not any(m.count_nonzero() for m in self.blocks.values())

    @property
    def nnz(self):
        return sum(m.nnz for m in self.blocks.values())

    def terms(self):
        for p in sorted(self.blocks):
            m = self.blocks[p].tocoo()
            for i, j, c in zip(m.row.tolist(), m.col.tolist(), m.data.tolist()):
                yield p, i, j, c

    def boundary(self):
        """∂(a⊗b) = ∂a⊗b + (−1)^{|a|} a⊗∂b."""
        out = {}
        for p, m in self.blocks.items():
            q = self.degree - p
            if self.left.rank(p - 1):
                out[p - 1] = out.get(p - 1, 0) + self.left.boundary(p) @ m
            if self.right.rank(q - 1):
                out[p] = out.get(p, 0) + _sign(p) * (m @ self.right.boundary(q).T)
        return TensorChain(self.left, self.right, self.degree - 1, out)

    def swap(self):
        """T: L⊗R → R⊗L, a⊗b ↦ (−1)^{|a||b|} b⊗a."""
        out = {}
        for p, m in self.blocks.items():
            q = self.degree - p
            out[q] = _sign(p * q) * m.T.tocsr()
        return TensorChain(self.right, self.left, self.degree, out)

    def apply(self, f: ChainMap, g: ChainMap):
        """(f⊗g)(x) for degree-0 maps f on the left factor and g on the right."""
        if f.source is not self.left or g.source is not self.right:
            raise ShapeMismatch("maps do not start at the factors of this tensor chain")
        out = {}
        for p, m in self.blocks.items():
            q = self.degree - p
            out[p] = f.component(p) @ m @ g.component(q).T
        return TensorChain(f.target, g.target, self.degree, out)

    def slant(self, p, alpha):
        """Evaluate a p-cochain on the left factor: Σ α(a_i) M[i, j] b_j."""
        m = self.blocks.get(p)
        q = self.degree - p
        if m is None:
            return np.zeros(self.right.rank(q), dtype=np.int64)
        return np.asarray(m.T @ np.asarray(alpha, dtype=np.int64)).ravel()

    def evaluate(self, p, alpha, beta):
        """(α⊗β)(x) for α on L_p and β on R_{degree−p}."""
        return int(np.dot(self.slant(p, alpha), np.asarray(beta, dtype=np.int64)))

    def to_vector(self):
        """Coordinates in ``tensor_complex(left, right)`` at this degree."""
        offs = tensor_offsets(self.left, self.right).get(self.degree, [])
        total = offs[-1][2] + self.left.rank(offs[-1][0]) * self.right.rank(offs[-1][1]) if offs else 0
        vec = np.zeros(total, dtype=np.int64)
        for p, q, start in offs:
            m = self.blocks.get(p)
            if m is None:
                continue
            coo = m.tocoo()
            np.add.at(vec, start + coo.row * self.right.rank(q) + coo.col, coo.data)
        return vec

    @classmethod
    def from_vector(cls, left, right, degree, vec):
        vec = np.asarray(vec, dtype=np.int64)
        blocks = {}
        for p, q, start in tensor_offsets(left, right).get(degree, []):
            rp, rq = left.rank(p), right.rank(q)
            blocks[p] = sp.csr_matrix(vec[start: start + rp * rq].reshape(rp, rq))
        return cls(left, right, degree, blocks)

    def __repr__(self):
        return f"TensorChain(degree={self.degree}, nnz={self.nnz}, blocks={sorted(self.blocks)})"


def tensor_square(C: ChainComplex) -> ChainComplex:
    """C⊗C, cached on C."""
    sq = getattr(C, "_tensor_square", None)
    if sq is None:
        sq = tensor_complex(C, C)
        C._tensor_square = sq
    return sq


# -- Steenrod diagonals -------------------------------------------------------------


@lru_cache(maxsize=None)
def steenrod_terms(n, s):
    """Terms of Δ_s on the standard n-simplex as (front positions, back positions, sign).

    Subsets U ⊆ {0..n} of size n−s are split by the parity of u + (rank of u
    in U); the front face drops U⁰ and the back face drops U¹.
    """
    if s < 0 or s > n:
        return ()
    out = []
    for U in itertools.combinations(range(n + 1), n - s):
        u0 = [u for j, u in enumerate(U, 1) if (u + j) % 2 == 0]
        u1 = [u for j, u in enumerate(U, 1) if (u + j) % 2 == 1]
        front = tuple(k for k in range(n + 1) if k not in u0)
        back = tuple(k for k in range(n + 1) if k not in u1)
        crossings = sum(1 for a in u1 for b in u0 if b < a)
        out.append((front, back, _sign(crossings + s * (1 + len(u1)))))
    return tuple(out)


def diagonal_of_simplex(simplex, s):
    """Δ_s of one ordered simplex as a dict (front face, back face) → coefficient."""
    simplex = tuple(simplex)
    out = {}
    for front, back, e in steenrod_terms(len(simplex) - 1, s):
        key = (tuple(simplex[i] for i in front), tuple(simplex[i] for i in back))
        out[key] = out.get(key, 0) + e
    return {k: v for k, v in out.items() if v}


def diagonal_chain(X, s, k, vec) -> TensorChain:
    """Δ_s applied to a k-chain of the simplicial complex X, without building C⊗C."""
    C = X.chain_complex
    vec = np.asarray(vec)
    simplices = X.simplices(k)
    idx = X.index
    terms = []
    for i in np.flatnonzero(vec).tolist():
        c = int(vec[i])
        sigma = simplices[i]
        for front, back, e in steenrod_terms(k, s):
            a = tuple(sigma[t] for t in front)
            b = tuple(sigma[t] for t in back)
            terms.append((len(a) - 1, idx[a], idx[b], e * c))
    return TensorChain.from_terms(C, C, k + s, terms)


def higher_diagonal(X, s) -> ChainMap:
    """Δ_s as a degree-s chain map chains(X) → chains(X)⊗chains(X)."""
    C = X.chain_complex
    sq = tensor_square(C)
    offs = {n: {(p, q): start for p, q, start in blocks} for n, blocks in sq.tensor_blocks.items()}
    comps = {}
    for k in range(X.dim + 1):
        rows, cols, vals = [], [], []
        for j, sigma in enumerate(X.simplices(k)):
            for front, back, e in steenrod_terms(k, s):
                a = tuple(sigma[t] for t in front)
                b = tuple(sigma[t] for t in back)
                p, q = len(a) - 1, len(b) - 1
                rows.append(offs[k + s][(p, q)] + X.index[a] * C.rank(q) + X.index[b])
                cols.append(j)
                vals.append(e)
        if rows:
            comps[k] = sp.coo_matrix((vals, (rows, cols)), shape=(sq.rank(k + s), C.rank(k)), dtype=np.int64).tocsc()
    # the map commutes with ∂ only up to the Δ_{s−1} homotopy, so no plain chain-map check
    return ChainMap(C, sq, comps, degree=s, check=False)


def steenrod_defect(sigma, s):
    """∂Δ_s(σ) − (−1)^s Δ_s(∂σ) − (1 + (−1)^s T)Δ_{s−1}(σ); zero when the relation holds."""
    out = {}

    def add(key, v):
        out[key] = out.get(key, 0) + v

    for (a, b), c in diagonal_of_simplex(sigma, s).items():
        for i in range(len(a)):
            if len(a) > 1:
                add((a[:i] + a[i + 1:], b), _sign(i) * c)
        for i in range(len(b)):
            if len(b) > 1:
                add((a, b[:i] + b[i + 1:]), _sign(len(a) - 1 + i) * c)
    if len(sigma) > 1:
        for i in range(len(sigma)):
            face = sigma[:i] + sigma[i + 1:]
            for key, c in diagonal_of_simplex(face, s).items():
                add(key, -_sign(s) * _sign(i) * c)
    if s > 0:
        for (a, b), c in diagonal_of_simplex(sigma, s - 1).items():
            add((a, b), -c)
            add((b, a), -_sign(s) * _sign((len(a) - 1) * (len(b) - 1)) * c)
    return {k: v for k, v in out.items() if v}


def check_steenrod_relation(X, s_max=3):
    """Exact check of the Steenrod relation and locality on every simplex; returns failures."""
    failures = []
    for sigma in X.all_simplices:
        verts = set(sigma)
        for s in range(s_max + 1):
            if steenrod_defect(sigma, s):
                failures.append((sigma, s, "relation"))
            for a, b in diagonal_of_simplex(sigma, s):
                if not (set(a) <= verts and set(b) <= verts):
                    failures.append((sigma, s, "locality"))
    return failures


# -- W and involutive complexes ---------------------------------------------------


class WResolution:
    """Minimal periodic free resolution of ℤ over ℤ[ℤ/2].

    Unbounded above; ``complex(top)`` truncates to degrees 0..top with the
    underlying ℤ-basis (e_s, T e_s).
    """

    def rank(self, s):
        return 1 if s >= 0 else 0

    def differential(self, s):
        """d e_s = e_{s−1} + (−1)^s T e_{s−1}, as the 2×2 matrix on the ℤ-basis."""
        e = _sign(s)
        return np.array([[1, e], [e, 1]], dtype=np.int64)

    def complex(self, top):
        ranks = {s: 2 for s in range(top + 1)}
        bds = {s: self.differential(s) for s in range(1, top + 1)}
        C = ChainComplex(ranks, bds, {s: [("e", s), ("Te", s)] for s in ranks})
        T = {s: np.array([[0, 1], [1, 0]], dtype=np.int64) for s in ranks}
        return InvolutiveComplex(C, T)


class InvolutiveComplex:
    """Chain complex with a degree-0 involution commuting with ∂."""

    def __init__(self, complex: ChainComplex, involution, check=True):
        self.complex = complex
        self.involution = {}
        for k in complex.degrees:
            m = involution.get(k)
            n = complex.rank(k)
            if n == 0:
                continue
            self.involution[k] = as_sparse(m, (n, n)) if m is not None else sp.identity(n, dtype=np.int64, format="csc")
        if check:
            self.check()

    def T(self, k):
        m = self.involution.get(k)
        return m if m is not None else zero_matrix(0, 0)

    def check(self):
        C = self.complex
        for k in C.degrees:
            t = self.involution.get(k)
            if t is None:
                continue
            if (t @ t - sp.identity(C.rank(k), dtype=np.int64)).count_nonzero():
                raise BoundaryError(f"involution does not square to the identity in degree {k}")
            if C.rank(k - 1) and (C.boundary(k) @ t - self.involution[k - 1] @ C.boundary(k)).count_nonzero():
                raise BoundaryError(f"involution does not commute with the boundary in degree {k}")

    @classmethod
    def trivial(cls, C):
        return cls(C, {})

    @classmethod
    def sign(cls, C):
        return cls(C, {k: -sp.identity(C.rank(k), dtype=np.int64, format="csc") for k in C.degrees})

    @classmethod
    def integers(cls, sign=1):
        C = ChainComplex({0: 1})
        return cls(C, {0: [[sign]]})

    @classmethod
    def free(cls, rank=1, degree=0):
        """ℤ[ℤ/2]^rank concentrated in one degree, basis x_i, T x_i."""
        C = ChainComplex({degree: 2 * rank})
        t = sp.block_diag([np.array([[0, 1], [1, 0]])] * rank, format="csc", dtype=np.int64)
        return cls(C, {degree: t})

    @classmethod
    def tensor_square(cls, C: ChainComplex):
        sq = tensor_square(C)
        return cls(sq, swap_matrices(C, sq), check=False)


def swap_matrices(C, sq):
    """Matrices of T on each degree of the tensor square sq = C⊗C."""
    out = {}
    for m, blocks in sq.tensor_blocks.items():
        where = {(p, q): start for p, q, start in blocks}
        rows, cols, vals = [], [], []
        for p, q, start in blocks:
            rp, rq = C.rank(p), C.rank(q)
            i = np.repeat(np.arange(rp), rq)
            j = np.tile(np.arange(rq), rp)
            src = start + i * rq + j
            dst = where[(q, p)] + j * rp + i
            rows.append(dst)
            cols.append(src)
            vals.append(np.full(len(src), _sign(p * q), dtype=np.int64))
        n = sq.rank(m)
        out[m] = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)).tocsc()
    return out


# -- homotopy windows -----------------------------------------------------------------


class Z2Window:
    """Three consecutive groups (degrees n−1, n, n+1) of homotopy fixed points or orbits."""

    def __init__(self, D: InvolutiveComplex, kind: str, n: int):
        if not isinstance(D, InvolutiveComplex):
            raise UnboundedComplex("windows need a bounded involutive complex")
        if kind not in ("fixed", "orbits"):
            raise ValueError("kind must be 'fixed' or 'orbits'")
        self.D = D
        self.kind = kind
        self.n = int(n)
        self.layouts = {m: self._layout(m) for m in (n - 2, n - 1, n, n + 1)}
        ranks = {m: self._size(m) for m in (n - 1, n, n + 1)}
        bds = {m: self._differential(m) for m in (n, n + 1)}
        labels = {m: [("e", s, x) for s, _, size in self.layouts[m] for x in range(size)] for m in ranks}
        self.complex = ChainComplex(ranks, bds, labels)

    def _layout(self, m):
        C = self.D.complex
        out = []
        pos = 0
        if C.total_rank() == 0:
            return out
        if self.kind == "fixed":
            srange = range(0, max(C.hi - m, -1) + 1)
            deg = lambda s: m + s  # noqa: E731
        else:
            srange = range(0, max(m - C.lo, -1) + 1)
            deg = lambda s: m - s  # noqa: E731
        for s in srange:
            r = C.rank(deg(s))
            if r:
                out.append((s, pos, r))
                pos += r
        return out

    def _size(self, m):
        lay = self.layouts[m]
        return lay[-1][1] + lay[-1][2] if lay else 0

    def _differential(self, m):
        C = self.D.complex
        src, dst = self.layouts[m], self.layouts[m - 1]
        rows_n, cols_n = self._size(m - 1), self._size(m)
        if not rows_n or not cols_n:
            return zero_matrix(rows_n, cols_n)
        where_src = {s: (pos, size) for s, pos, size in src}
        blocks = []
        if self.kind == "fixed":
            for s, pos, size in dst:
                # (df)_s = ∂ f_s − (−1)^m (1 + (−1)^s T) f_{s−1}
                k = m - 1 + s
                if s in where_src:
                    blocks.append((pos, where_src[s][0], C.boundary(k + 1)))
                if s - 1 in where_src:
                    norm = sp.identity(C.rank(k), dtype=np.int64, format="csc") + _sign(s) * self.D.T(k)
                    blocks.append((pos, where_src[s - 1][0], -_sign(m) * norm))
        else:
            where_dst = {s: pos for s, pos, _ in dst}
            for s, pos, size in src:
                k = m - s
                # e_s⊗x ↦ e_{s−1}⊗(1 + (−1)^s T)x + (−1)^s e_s⊗∂x
                if s - 1 in where_dst:
                    norm = sp.identity(C.rank(k), dtype=np.int64, format="csc") + _sign(s) * self.D.T(k)
                    blocks.append((where_dst[s - 1], pos, norm))
                if s in where_dst and C.rank(k - 1):
                    blocks.append((where_dst[s], pos, _sign(s) * C.boundary(k)))
        return _assemble(blocks, rows_n, cols_n)

    def homology(self):
        return self.complex.homology(self.n)

    def vector(self, components):
        """Pack {s: vector in the block of e_s} into a vector of the degree-n group."""
        out = np.zeros(self._size(self.n), dtype=np.int64)
        where = {s: (pos, size) for s, pos, size in self.layouts[self.n]}
        for s, v in components.items():
            v = np.asarray(v, dtype=np.int64)
            if s not in where:
                if np.any(v):
                    raise ShapeMismatch(f"component {s} is outside the window")
                continue
            pos, size = where[s]
            out[pos: pos + size] = v
        return out

    def is_cycle(self, vec):
        return not np.any(self.complex.boundary(self.n) @ np.asarray(vec, dtype=np.int64))


def _assemble(blocks, rows, cols):
    r, c, v = [], [], []
    for i0, j0, m in blocks:
        m = sp.coo_matrix(m)
        r.append(m.row + i0)
        c.append(m.col + j0)
        v.append(m.data.astype(np.int64))
    if not r:
        return zero_matrix(rows, cols)
    out = sp.coo_matrix((np.concatenate(v), (np.concatenate(r), np.concatenate(c))), shape=(rows, cols)).tocsc()
    out.sum_duplicates()
    out.eliminate_zeros()
    return out


def z2_homotopy_window(D: InvolutiveComplex, kind: str, n: int) -> Z2Window:
    return Z2Window(D, kind, n)


class NormMap:
    """Norm from homotopy orbits to homotopy fixed points on a window."""

    def __init__(self, D: InvolutiveComplex, n: int):
        self.orbits = Z2Window(D, "orbits", n)
        self.fixed = Z2Window(D, "fixed", n)
        C = D.complex
        comps = {}
        for m in (n - 1, n, n + 1):
            rows, cols = self.fixed._size(m), self.orbits._size(m)
            blocks = []
            so = {s: pos for s, pos, _ in self.orbits.layouts[m]}
            sf = {s: pos for s, pos, _ in self.fixed.layouts[m]}
            if 0 in so and 0 in sf:
                norm = sp.identity(C.rank(m), dtype=np.int64, format="csc") + D.T(m)
                blocks.append((sf[0], so[0], norm))
            comps[m] = _assemble(blocks, rows, cols)
        self.map = ChainMap(self.orbits.complex, self.fixed.complex, comps, check=False)
        self._check_middle()
        self.n = n

    def _check_middle(self):
        # only the squares touching degree n are meaningful on a truncated window
        f, src, dst = self.map, self.orbits.complex, self.fixed.complex
        n = self.orbits.n
        for k in (n, n + 1):
            left = dst.boundary(k) @ f.component(k)
            right = f.component(k - 1) @ src.boundary(k)
            if (left - right).count_nonzero():
                raise BoundaryError(f"norm does not commute with the differential at degree {k}")

    def homology_matrix(self):
        from .homalg import induced_map

        return induced_map(self.map, self.n)

    def is_iso(self, invert_two=False):
        from .homalg import map_is_iso

        src, dst, M = self.homology_matrix()
        return map_is_iso(src, dst, M, invert_two=invert_two)


def norm_map(D: InvolutiveComplex, n: int) -> NormMap:
    return NormMap(D, n)


# -- symmetric structures -----------------------------------------------------------


class SymmetricStructure:
    """Components φ_s ∈ (C⊗C)_{n+s} for s = 0..window of an n-dimensional structure."""

    def __init__(self, complex: ChainComplex, n: int, components: dict, window: int):
        self.complex = complex
        self.n = int(n)
        self.window = int(window)
        self.components = dict(components)

    def component(self, s):
        phi = self.components.get(s)
        if phi is None:
            return TensorChain.zero(self.complex, self.complex, self.n + s)
        return phi

    def defect(self, s):
        """∂φ_s − (−1)^n (1 + (−1)^s T) φ_{s−1}; zero for a fixed-point cycle."""
        phi = self.component(s)
        out = phi.boundary()
        if s > 0:
            prev = self.component(s - 1)
            corr = prev + _sign(s) * prev.swap()
            out = out - _sign(self.n) * corr
        return out

    def check(self, relative_to=None):
        """Verify every coboundary relation up to the window.

        ``relative_to`` is a pair of boolean masks (by degree) of basis
        elements of the boundary subcomplex; the defects must then be
        supported on boundary⊗boundary.
        """
        bad = []
        for s in range(self.window + 1):
            d = self.defect(s)
            if relative_to is None:
                if not d.is_zero():
                    bad.append(s)
                continue
            for p, m in d.blocks.items():
                coo = m.tocoo()
                q = d.degree - p
                lm, rm = relative_to.get(p), relative_to.get(q)
                if lm is None or rm is None or not (lm[coo.row].all() and rm[coo.col].all()):
                    bad.append(s)
                    break
        return bad

    def fixed_point_vector(self, window: Z2Window):
        """The structure as a degree-n element of a fixed-point window (small complexes only)."""
        return window.vector({s: self.component(s).to_vector() for s in self.components})


def symmetric_construction(M, window=2) -> SymmetricStructure:
    """φ_s = (−1)^{ns} Δ_s(ω) for s ≤ window."""
    if window < 0:
        raise ValueError("window must be nonnegative")
    X = M.base
    n = M.n
    omega = M.fundamental_cycle()
    comps = {}
    for s in range(window + 1):
        comps[s] = _sign(n * s) * diagonal_chain(X, s, n, omega)
    return SymmetricStructure(X.chain_complex, n, comps, window)
