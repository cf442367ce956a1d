"""Maps between finitely generated abelian groups given in Smith coordinates."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .smith import smith_normal_form


def spmv(A, v):
    """Sparse matrix times a vector that may hold Python ints."""
    v = np.asarray(v)
    if v.dtype != object:
        return A @ v
    coo = sp.coo_matrix(A)
    out = np.zeros(A.shape[0], dtype=object)
    out[:] = 0
    for i, j, c in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        if v[j]:
            out[i] += int(c) * v[j]
    return out


def induced_map(f, k):
    """Matrix of H_k(f) in the engines' generator coordinates.

    Returns (source orders, target orders, matrix) where orders are 0 for a
    free generator and d for a ℤ/d generator, and column i is the image of
    source generator i.
    """
    src, dst = f.source, f.target
    src_orders = src.engine.order(k) if src.rank(k) else []
    dst_orders = dst.engine.order(k) if dst.rank(k) else []
    cols = []
    if src_orders:
        for rep in src.engine.representatives(k):
            image = spmv(f.component(k), rep)
            cols.append(dst.engine.coordinates(k + f.degree, image) if dst_orders else [])
    M = [[cols[j][i] for j in range(len(cols))] for i in range(len(dst_orders))]
    return src_orders, dst_orders, M


def odd_part(d):
    while d and d % 2 == 0:
        d //= 2
    return d


def invariants(orders, invert_two=False):
    free = sum(1 for o in orders if o == 0)
    tors = [odd_part(o) if invert_two else o for o in orders if o > 1]
    return free, tuple(sorted(t for t in tors if t > 1))


def is_surjective(dst_orders, M, invert_two=False):
    """Whether the columns of M together with the order relations span the target."""
    rows = len(dst_orders)
    if rows == 0:
        return True
    ncols = len(M[0]) if M else 0
    rel = [list(M[i]) + [dst_orders[i] if j == i else 0 for j in range(rows)] for i in range(rows)]
    if ncols + rows == 0:
        return False
    diag = smith_normal_form(rel).diag
    if len(diag) < rows:
        return False
    for d in diag[:rows]:
        if d == 0:
            return False
        if (odd_part(d) if invert_two else d) != 1:
            return False
    return True


def map_is_iso(src_orders, dst_orders, M, invert_two=False):
    """Iso test: equal invariants plus surjectivity (f.g. modules are Hopfian)."""
    if invariants(src_orders, invert_two) != invariants(dst_orders, invert_two):
        return False
    return is_surjective(dst_orders, M, invert_two)


def group_dict(orders):
    free, tors = invariants(orders)
    return {"betti": free, "torsion": list(tors)}
