"""Homology of a chain complex with explicit cycle coordinates.

The engine shrinks a complex in three passes:

1. collapses and coreductions that never create fill-in (compiled kernel);
2. unit-pivot Gaussian elimination with a Markowitz-style pivot order;
3. Smith normal form of the small remainder.

Each elimination of a pair (a, b) with <∂a, b> = ±1 is a chain homotopy
equivalence with explicit projection and inclusion maps.  Recording the steps
lets us push any cycle down to the remainder (coordinates in homology) and
lift remainder generators back up (representative cycles).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .smith import matvec, smith_normal_form


class HomologyGroup:
    """Finitely generated abelian group ℤ^betti ⊕ ⊕ ℤ/t."""

    __slots__ = ("degree", "betti", "torsion")

    def __init__(self, degree, betti=0, torsion=()):
        self.degree = int(degree)
        self.betti = int(betti)
        self.torsion = tuple(sorted(int(t) for t in torsion))
        for k in range(len(self.torsion) - 1):
            if self.torsion[k + 1] % self.torsion[k]:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def is_zero(self):
        return self.betti == 0 and not self.torsion

    @property
    def invariants(self):
        return (self.betti, self.torsion)

    def as_dict(self):
        return {"betti": self.betti, "torsion": list(self.torsion)}

    def __eq__(self, other):
        if not isinstance(other, HomologyGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    def __repr__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return f"H_{self.degree} = " + (" + ".join(parts) if parts else "0")


def _global_faces(C):
    """Global numbering plus face/coface CSR triples for a ChainComplex."""
    degrees = list(range(C.lo, C.hi + 1))
    offset = {}
    n = 0
    for k in degrees:
        offset[k] = n
        n += C.rank(k)
    deg = np.empty(n, dtype=np.int64)
    for k in degrees:
        deg[offset[k]: offset[k] + C.rank(k)] = k
    rows, cols, vals = [], [], []
    for k in degrees:
        if k - 1 not in offset or C.rank(k) == 0 or C.rank(k - 1) == 0:
            continue
        m = C.boundary(k).tocoo()
        if m.nnz == 0:
            continue
        rows.append(m.row.astype(np.int64) + offset[k - 1])
        cols.append(m.col.astype(np.int64) + offset[k])
        vals.append(m.data.astype(np.int64))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        v = np.concatenate(vals)
    else:
        r = c = v = np.zeros(0, dtype=np.int64)
    F = sp.coo_matrix((v, (r, c)), shape=(n, n)).tocsc()
    F.sum_duplicates()
    F.eliminate_zeros()
    Fr = F.tocsr()
    Fr.sort_indices()
    F.sort_indices()
    faces = (F.indptr.astype(np.int64), F.indices.astype(np.int64), F.data.astype(np.int64))
    cofaces = (Fr.indptr.astype(np.int64), Fr.indices.astype(np.int64), Fr.data.astype(np.int64))
    return n, deg, offset, faces, cofaces


class HomologyEngine:
    """Reduced model of a ChainComplex; answers homology queries in every degree."""

    def __init__(self, C):
        self.complex = C
        n, deg, offset, faces, cofaces = _global_faces(C)
        self.n = n
        self.deg = deg
        self.offset = offset
        self.faces = faces
        self.cofaces = cofaces
        sa, sb, se, alive = _kernels.nofill_reduce(n, faces, cofaces)
        self.steps1 = (sa, sb, se)
        self.steps2 = []
        col, row = self._remainder_dicts(alive)
        self._unit_eliminate(col, row)
        self._finish(col, row)

    # -- reduction passes -------------------------------------------------

    def _remainder_dicts(self, alive):
        ptr, idx, val = self.faces
        live = np.flatnonzero(alive)
        col = {}
        row = {}
        for c in live.tolist():
            row.setdefault(c, {})
            d = {}
            for p in range(ptr[c], ptr[c + 1]):
                f = int(idx[p])
                if alive[f]:
                    d[f] = int(val[p])
            col[c] = d
        for c, d in col.items():
            for f, v in d.items():
                row.setdefault(f, {})[c] = v
        return col, row

    def _unit_eliminate(self, col, row):
        steps = self.steps2
        progress = True
        while progress:
            progress = False
            for a in sorted(col):
                if a not in col:
                    continue
                da = col[a]
                best = None
                for f, v in da.items():
                    if v == 1 or v == -1:
                        cost = len(row[f])
                        if best is None or cost < best[0]:
                            best = (cost, f, v)
                if best is None:
                    continue
                _, b, eps = best
                snap_a = dict(da)
                snap_b = dict(row[b])
                steps.append((a, b, eps, snap_a, snap_b))
                for x, cxb in snap_b.items():
                    if x == a:
                        continue
                    fac = eps * cxb
                    dx = col[x]
                    for f, v in snap_a.items():
                        nv = dx.get(f, 0) - fac * v
                        if nv:
                            dx[f] = nv
                            row[f][x] = nv
                        else:
                            dx.pop(f, None)
                            row[f].pop(x, None)
                for cell in (a, b):
                    for f in col[cell]:
                        row[f].pop(cell, None)
                    for g in row[cell]:
                        col[g].pop(cell, None)
                for cell in (a, b):
                    del col[cell]
                    del row[cell]
                progress = True

    def _finish(self, col, row):
        C = self.complex
        cells = {k: [] for k in range(C.lo - 1, C.hi + 2)}
        for c in sorted(col):
            cells[int(self.deg[c])].append(c)
        self.rem_cells = cells
        self.rem_index = {k: {c: i for i, c in enumerate(v)} for k, v in cells.items()}
        self.groups = {}
        self._kernel = {}
        self._quot = {}
        bmat = {}
        for k in range(C.lo, C.hi + 2):
            src, dst = cells.get(k, []), cells.get(k - 1, [])
            di = self.rem_index.get(k - 1, {})
            m = [[0] * len(src) for _ in dst]
            for j, c in enumerate(src):
                for f, v in col[c].items():
                    m[di[f]][j] = v
            bmat[k] = m
        self._bmat = bmat
        for k in range(C.lo, C.hi + 1):
            mk = len(cells[k])
            if mk == 0:
                self.groups[k] = HomologyGroup(k)
                continue
            if cells[k - 1]:
                snf = smith_normal_form(bmat[k])
                r, Vi, V = snf.rank, snf.V_inv, snf.V
            else:
                r, Vi, V = 0, [[int(i == j) for j in range(mk)] for i in range(mk)], None
            self._kernel[k] = (r, Vi, V, mk)
            nxt = bmat.get(k + 1)
            ncols = len(cells.get(k + 1, []))
            if ncols and mk - r:
                W = [row_[:] for row_ in _mm(Vi, nxt)[r:]]
                snf2 = smith_normal_form(W)
                d = list(snf2.diag) + [0] * (len(W) - len(snf2.diag))
                U2, U2i = snf2.U, snf2.U_inv
            else:
                d = [0] * (mk - r)
                U2 = [[int(i == j) for j in range(mk - r)] for i in range(mk - r)]
                U2i = U2
            keep = [i for i, x in enumerate(d) if x != 1]
            torsion = [d[i] for i in keep if d[i] > 1]
            betti = sum(1 for i in keep if d[i] == 0)
            self._quot[k] = (U2, U2i, keep, [d[i] for i in keep])
            self.groups[k] = HomologyGroup(k, betti, torsion)

    # -- queries ----------------------------------------------------------

    def homology(self, k):
        return self.groups.get(k, HomologyGroup(k))

    def is_acyclic(self):
        return all(g.is_zero for g in self.groups.values())

    def order(self, k):
        """Orders of the generators in degree k: torsion first, then 0 for free."""
        if k not in self._quot:
            return []
        return list(self._quot[k][3])

    def _project_to_remainder(self, k, z):
        C = self.complex
        w = np.zeros(self.n, dtype=np.int64)
        z = np.asarray(z)
        if z.dtype == object or (z.size and np.abs(z).max() > _kernels.GROWTH_LIMIT):
            w = w.astype(object)
            w[self.offset[k]: self.offset[k] + C.rank(k)] = [int(x) for x in z]
            _kernels._project_py(*self.steps1, *self.faces, self.deg, k, w)
        else:
            w[self.offset[k]: self.offset[k] + C.rank(k)] = z
            if not _kernels.project(self.steps1, self.faces, self.deg, k, w):
                w = np.zeros(self.n, dtype=object)
                w[self.offset[k]: self.offset[k] + C.rank(k)] = [int(x) for x in z]
                _kernels._project_py(*self.steps1, *self.faces, self.deg, k, w)
        vec = {int(i): int(w[i]) for i in np.flatnonzero(w)}
        deg = self.deg
        for a, b, eps, da, _ in self.steps2:
            if deg[b] == k:
                wb = vec.pop(b, 0)
                if wb:
                    coef = eps * wb
                    for f, v in da.items():
                        if f == b:
                            continue
                        nv = vec.get(f, 0) - coef * v
                        if nv:
                            vec[f] = nv
                        else:
                            vec.pop(f, None)
            if deg[a] == k:
                vec.pop(a, None)
        return [vec.get(c, 0) for c in self.rem_cells.get(k, [])]

    def coordinates(self, k, z):
        """Coordinates of the class of the k-cycle z (torsion entries reduced)."""
        if k not in self._quot:
            return []
        x = self._project_to_remainder(k, z)
        r, Vi, _, _ = self._kernel[k]
        y = matvec(Vi, x)
        if any(y[:r]):
            raise ValueError("vector is not a cycle")
        U2, _, keep, orders = self._quot[k]
        y2 = matvec(U2, y[r:])
        out = []
        for i, d in zip(keep, orders):
            out.append(y2[i] % d if d > 1 else y2[i])
        return out

    def representatives(self, k):
        """One cycle per generator of H_k, in the order of ``coordinates``."""
        if k not in self._quot:
            return []
        r, Vi, V, mk = self._kernel[k]
        U2, U2i, keep, _ = self._quot[k]
        reps = []
        for i in keep:
            col = [row_[i] for row_ in U2i]
            if V is None:
                x = col
            else:
                x = [sum(V[a][r + b] * col[b] for b in range(len(col)) if col[b]) for a in range(mk)]
            reps.append(self._lift(k, x))
        return reps

    def _lift(self, k, x):
        vec = {}
        for c, v in zip(self.rem_cells[k], x):
            if v:
                vec[c] = v
        deg = self.deg
        for a, b, eps, _, rb in reversed(self.steps2):
            if deg[a] != k:
                continue
            coef = 0
            for g, v in rb.items():
                xv = vec.get(g)
                if xv:
                    coef += xv * v
            if coef:
                vec[a] = vec.get(a, 0) - eps * coef
        big = any(abs(v) > _kernels.GROWTH_LIMIT for v in vec.values())
        w = np.zeros(self.n, dtype=object if big else np.int64)
        for c, v in vec.items():
            w[c] = v
        if big or not _kernels.include(self.steps1, self.cofaces, self.deg, k, w):
            w2 = np.zeros(self.n, dtype=object)
            for c, v in vec.items():
                w2[c] = v
            _kernels._include_py(*self.steps1, *self.cofaces, self.deg, k, w2)
            w = w2
        C = self.complex
        out = w[self.offset[k]: self.offset[k] + C.rank(k)]
        if out.dtype == object and all(abs(int(v)) <= _kernels.GROWTH_LIMIT for v in out):
            out = out.astype(np.int64)
        return out


def _mm(a, b):
    from .smith import matmul

    return matmul(a, b)
