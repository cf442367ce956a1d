"""Exact integer chain complexes: homology, cones, tensor products, duals.

Boundary matrices are stored as ``scipy.sparse.csc_matrix`` with int64
entries (column-major sparse triples).  Homology goes through
:class:`sapc.reduction.HomologyEngine`, which works with Python integers
wherever entries can grow.

Conventions
-----------
* tensor boundary: ∂(a⊗b) = ∂a⊗b + (−1)^|a| a⊗∂b;
* dual complex at n: degree k is hom(C_{n−k}, ℤ) with boundary (−1)^k ∂ᵀ;
* cone(f)_k = target_k ⊕ source_{k−1}, ∂(t, s) = (∂t + f s, −∂s);
* a map of degree d commutes as ∂f = (−1)^d f∂.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .errors import BoundaryError, ShapeMismatch
from .reduction import HomologyEngine, HomologyGroup

__all__ = [
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "homology",
    "mapping_cone",
    "tensor_complex",
    "dual_complex",
    "cochain_complex",
    "is_quasi_iso",
    "zero_matrix",
    "as_sparse",
]


def zero_matrix(rows, cols):
    return sp.csc_matrix((rows, cols), dtype=np.int64)


def as_sparse(m, shape=None):
    if sp.issparse(m):
        out = sp.csc_matrix(m, dtype=np.int64)
    else:
        arr = np.asarray(m, dtype=np.int64)
        if shape is not None and arr.size == 0:
            arr = arr.reshape(shape)
        out = sp.csc_matrix(arr)
    out.eliminate_zeros()
    if shape is not None and out.shape != tuple(shape):
        raise ShapeMismatch(f"matrix has shape {out.shape}, expected {tuple(shape)}")
    return out


class ChainComplex:
    """Bounded complex of finitely generated free abelian groups."""

    def __init__(self, ranks: Mapping[int, int], boundaries=None, labels=None, check=True):
        self.ranks = {int(k): int(v) for k, v in ranks.items() if int(v) > 0}
        if any(v < 0 for v in ranks.values()):
            raise ShapeMismatch("ranks must be nonnegative")
        if self.ranks:
            self.lo, self.hi = min(self.ranks), max(self.ranks)
        else:
            self.lo, self.hi = 0, -1
        self.boundaries = {}
        for k, m in (boundaries or {}).items():
            k = int(k)
            shape = (self.rank(k - 1), self.rank(k))
            if shape[0] == 0 or shape[1] == 0:
                if sp.issparse(m) and m.nnz or (not sp.issparse(m) and np.count_nonzero(np.asarray(m))):
                    raise ShapeMismatch(f"nonzero boundary into or out of a zero group at degree {k}")
                continue
            mat = as_sparse(m, shape)
            if mat.nnz:
                self.boundaries[k] = mat
        self.labels = None
        if labels is not None:
            self.labels = {}
            for k in self.ranks:
                lab = list(labels.get(k, range(self.ranks[k])))
                if len(lab) != self.ranks[k]:
                    raise ShapeMismatch(f"{len(lab)} labels for a rank-{self.ranks[k]} group in degree {k}")
                self.labels[k] = lab
        self._engine = None
        if check:
            self.check()

    # -- structure --------------------------------------------------------

    def rank(self, k):
        return self.ranks.get(k, 0)

    def boundary(self, k):
        m = self.boundaries.get(k)
        if m is None:
            return zero_matrix(self.rank(k - 1), self.rank(k))
        return m

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    def label(self, k, i):
        if self.labels is None:
            return i
        return self.labels[k][i]

    def basis_labels(self, k):
        if self.rank(k) == 0:
            return []
        if self.labels is None:
            return list(range(self.rank(k)))
        return list(self.labels[k])

    def check(self):
        for k in self.degrees:
            a, b = self.boundaries.get(k), self.boundaries.get(k + 1)
            if a is not None and b is not None and (a @ b).count_nonzero():
                raise BoundaryError(f"boundary squares to a nonzero map at degree {k + 1}")

    def total_rank(self):
        return sum(self.ranks.values())

    def euler_characteristic(self):
        return sum((-1) ** k * r for k, r in self.ranks.items())

    def __repr__(self):
        body = ", ".join(f"{k}:{self.rank(k)}" for k in self.degrees)
        return f"ChainComplex({{{body}}})"

    # -- homology ---------------------------------------------------------

    @property
    def engine(self):
        if self._engine is None:
            self._engine = HomologyEngine(self)
        return self._engine

    def homology(self, k):
        if self.rank(k) == 0:
            return HomologyGroup(k)
        return self.engine.homology(k)

    def apply_boundary(self, k, v):
        return self.boundary(k) @ np.asarray(v, dtype=np.int64)

    # -- basic constructions ---------------------------------------------

    def subcomplex(self, keep: Mapping[int, np.ndarray]):
        """Span of the selected basis elements; must be closed under ∂."""
        return self._restrict(keep, quotient=False)

    def quotient(self, keep: Mapping[int, np.ndarray]):
        """Quotient by the span of the unselected elements (must be a subcomplex)."""
        return self._restrict(keep, quotient=True)

    def _restrict(self, keep, quotient):
        idx = {}
        for k in self.degrees:
            mask = keep.get(k)
            if mask is None:
                idx[k] = np.zeros(0, dtype=np.int64)
                continue
            mask = np.asarray(mask)
            idx[k] = np.flatnonzero(mask) if mask.dtype == bool else np.asarray(mask, dtype=np.int64)
        ranks = {k: len(v) for k, v in idx.items()}
        bds = {}
        for k in self.degrees:
            if k - 1 not in idx or not len(idx[k]) or not len(idx[k - 1]):
                continue
            full = self.boundary(k)[:, idx[k]]
            if not quotient:
                inside = np.zeros(self.rank(k - 1), dtype=bool)
                inside[idx[k - 1]] = True
                rows = full.tocoo().row
                if len(rows) and not inside[rows].all():
                    raise BoundaryError(f"selection is not closed under the boundary in degree {k}")
            bds[k] = full[idx[k - 1], :]
        labels = None
        if self.labels is not None:
            labels = {k: [self.labels[k][i] for i in v] for k, v in idx.items() if len(v)}
        out = ChainComplex(ranks, bds, labels, check=False)
        out.parent_index = idx
        return out

    def shift(self, s):
        """Complex with degrees moved up by s and boundary signs (−1)^s."""
        sign = -1 if s % 2 else 1
        return ChainComplex(
            {k + s: r for k, r in self.ranks.items()},
            {k + s: sign * m for k, m in self.boundaries.items()},
            None if self.labels is None else {k + s: v for k, v in self.labels.items()},
            check=False,
        )


def direct_sum(*complexes):
    degrees = set()
    for C in complexes:
        degrees |= set(C.ranks)
    ranks = {k: sum(C.rank(k) for C in complexes) for k in degrees}
    bds = {}
    for k in degrees:
        blocks = [C.boundary(k) for C in complexes]
        if any(b.nnz for b in blocks):
            bds[k] = sp.block_diag(blocks, format="csc", dtype=np.int64)
    labels = None
    if all(C.labels is not None for C in complexes):
        labels = {k: [(i, lab) for i, C in enumerate(complexes) for lab in C.basis_labels(k)] for k in degrees}
    return ChainComplex(ranks, bds, labels, check=False)


class ChainMap:
    """Homomorphism of graded groups of a fixed degree commuting with ∂ up to sign."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components=None, degree=0, check=True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.components = {}
        for k, m in (components or {}).items():
            k = int(k)
            shape = (target.rank(k + self.degree), source.rank(k))
            if 0 in shape:
                continue
            mat = as_sparse(m, shape)
            if mat.nnz:
                self.components[k] = mat
        if check:
            self.check()

    def component(self, k):
        m = self.components.get(k)
        if m is None:
            return zero_matrix(self.target.rank(k + self.degree), self.source.rank(k))
        return m

    def check(self):
        sign = -1 if self.degree % 2 else 1
        lo = min(self.source.lo, self.target.lo - self.degree)
        hi = max(self.source.hi, self.target.hi - self.degree) + 1
        for k in range(lo, hi + 1):
            left = self.target.boundary(k + self.degree) @ self.component(k)
            right = self.component(k - 1) @ self.source.boundary(k)
            if (left - sign * right).count_nonzero():
                raise BoundaryError(f"map does not commute with boundaries at source degree {k}")

    def __call__(self, k, v):
        return self.component(k) @ np.asarray(v, dtype=np.int64)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self ∘ other."""
        comps = {}
        for k in other.source.degrees:
            comps[k] = self.component(k + other.degree) @ other.component(k)
        return ChainMap(other.source, self.target, comps, self.degree + other.degree, check=False)

    @classmethod
    def identity(cls, C):
        return cls(C, C, {k: sp.identity(C.rank(k), dtype=np.int64, format="csc") for k in C.degrees}, 0, check=False)

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, {}, degree, check=False)


def homology(C: ChainComplex, n: int) -> HomologyGroup:
    return C.homology(n)


def mapping_cone(f: ChainMap) -> ChainComplex:
    if f.degree != 0:
        raise ShapeMismatch("mapping cone needs a degree-0 map")
    S, T = f.source, f.target
    degrees = set(T.ranks) | {k + 1 for k in S.ranks}
    ranks = {k: T.rank(k) + S.rank(k - 1) for k in degrees}
    bds = {}
    for k in degrees:
        if k - 1 not in degrees:
            continue
        top = sp.hstack([T.boundary(k), f.component(k - 1)])
        bottom = sp.hstack([zero_matrix(S.rank(k - 2), T.rank(k)), -S.boundary(k - 1)])
        bds[k] = sp.vstack([top, bottom]).tocsc()
    labels = None
    if T.labels is not None and S.labels is not None:
        labels = {
            k: [("t", x) for x in T.basis_labels(k)] + [("s", x) for x in S.basis_labels(k - 1)] for k in degrees
        }
    return ChainComplex(ranks, bds, labels)


def tensor_offsets(C: ChainComplex, D: ChainComplex):
    """For each total degree n, the list of (p, q, start) blocks in basis order."""
    out = {}
    for n in range(C.lo + D.lo, C.hi + D.hi + 1):
        pos = 0
        blocks = []
        for p in range(C.lo, C.hi + 1):
            q = n - p
            size = C.rank(p) * D.rank(q)
            if size:
                blocks.append((p, q, pos))
                pos += size
        if pos:
            out[n] = blocks
    return out


def tensor_complex(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """C⊗D; degree-n basis is ordered by p, then C-index, then D-index."""
    offs = tensor_offsets(C, D)
    ranks = {}
    for n, blocks in offs.items():
        p, q, start = blocks[-1]
        ranks[n] = start + C.rank(p) * D.rank(q)
    bds = {}
    for n, blocks in offs.items():
        if n - 1 not in offs:
            continue
        where = {(p, q): s for p, q, s in offs[n - 1]}
        rows, cols, vals = [], [], []
        for p, q, start in blocks:
            if (p - 1, q) in where and C.boundaries.get(p) is not None:
                m = sp.kron(C.boundary(p), sp.identity(D.rank(q), dtype=np.int64, format="csc")).tocoo()
                rows.append(m.row + where[(p - 1, q)])
                cols.append(m.col + start)
                vals.append(m.data)
            if (p, q - 1) in where and D.boundaries.get(q) is not None:
                m = sp.kron(sp.identity(C.rank(p), dtype=np.int64, format="csc"), D.boundary(q)).tocoo()
                sign = -1 if p % 2 else 1
                rows.append(m.row + where[(p, q - 1)])
                cols.append(m.col + start)
                vals.append(sign * m.data)
        if rows:
            bds[n] = sp.coo_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(ranks[n - 1], ranks[n])
            ).tocsc()
    labels = {}
    for n, blocks in offs.items():
        lab = []
        for p, q, _ in blocks:
            la, lb = C.basis_labels(p), D.basis_labels(q)
            lab.extend((x, y) for x in la for y in lb)
        labels[n] = lab
    out = ChainComplex(ranks, bds, labels)
    out.tensor_blocks = offs
    return out


def dual_complex(C: ChainComplex, n: int) -> ChainComplex:
    ranks = {n - k: r for k, r in C.ranks.items()}
    bds = {}
    for k in ranks:
        # degree k → k−1 is the transpose of ∂ on C_{n−k+1} → C_{n−k}
        m = C.boundaries.get(n - k + 1)
        if m is not None and k - 1 in ranks:
            sign = -1 if k % 2 else 1
            bds[k] = (sign * m.T).tocsc()
    labels = None
    if C.labels is not None:
        labels = {n - k: [("dual", x) for x in v] for k, v in C.labels.items()}
    return ChainComplex(ranks, bds, labels)


def cochain_complex(C: ChainComplex) -> ChainComplex:
    """Cochains as a chain complex: degree −k holds hom(C_k, ℤ), differential ∂ᵀ."""
    ranks = {-k: r for k, r in C.ranks.items()}
    bds = {}
    for k, m in C.boundaries.items():
        # ∂_k: C_k → C_{k−1}; its transpose goes from degree −(k−1) to −k
        bds[-(k - 1)] = m.T.tocsc()
    return ChainComplex(ranks, bds, None, check=False)


def double_dual_evaluation(C: ChainComplex, n: int) -> ChainMap:
    """Canonical chain isomorphism C → dual(dual(C, n), n)."""
    DD = dual_complex(dual_complex(C, n), n)
    comps = {}
    for k in C.degrees:
        sign = -1 if ((n + 1) * k) % 2 else 1
        comps[k] = sign * sp.identity(C.rank(k), dtype=np.int64, format="csc")
    return ChainMap(C, DD, comps)


def is_quasi_iso(f: ChainMap) -> bool:
    if f.degree != 0:
        raise ShapeMismatch("quasi-isomorphism test needs a degree-0 map")
    return mapping_cone(f).engine.is_acyclic()


def homology_all(C: ChainComplex):
    return {k: C.homology(k) for k in C.degrees}
