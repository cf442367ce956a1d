"""Dense Smith normal form over the integers with unimodular transforms.

Entries are Python ints throughout, so there is no overflow however large the
intermediate values get.  Set ``SAPC_CHECK_SNF=1`` to verify every result by
exact multiplication (the test suite does).
"""

from __future__ import annotations

import os
from dataclasses import dataclass


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    """Product of two list-of-lists integer matrices."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v) if x and y) for row in a]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == diag`` padded to M's shape; U, V unimodular."""

    diag: tuple
    U: list
    U_inv: list
    V: list
    V_inv: list
    shape: tuple

    @property
    def rank(self):
        return sum(1 for d in self.diag if d)


def _check_enabled():
    return os.environ.get("SAPC_CHECK_SNF", "0") not in ("0", "", "false", "no")


def smith_normal_form(matrix, check=None):
    """Smith form of an integer matrix given as a list of rows.

    The pivot at each step is an entry of least absolute value in the active
    block, which keeps entry growth small on boundary-type matrices.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    a = [[int(x) for x in r] for r in matrix]
    U, Ui = _identity(rows), _identity(rows)
    V, Vi = _identity(cols), _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(cols):
            if rs[k]:
                ra[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(rows):
            if us[k]:
                ud[k] += q * us[k]
        for r in Ui:
            if r[dst]:
                r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]
        vs, vd = Vi[src], Vi[dst]
        for k in range(cols):
            if vd[k]:
                vs[k] -= q * vd[k]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        best = None
        for i in range(t, rows):
            ri = a[i]
            for j in range(t, cols):
                x = ri[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cand = None
                for i in range(t + 1, rows):
                    x = a[i][t]
                    if x and (cand is None or abs(x) < cand[0]):
                        cand = (abs(x), "r", i)
                for j in range(t + 1, cols):
                    x = a[t][j]
                    if x and (cand is None or abs(x) < cand[0]):
                        cand = (abs(x), "c", j)
                if cand[1] == "r":
                    swap_rows(cand[2], t)
                else:
                    swap_cols(cand[2], t)
                continue
            bad = None
            for i in range(t + 1, rows):
                ri = a[i]
                for j in range(t + 1, cols):
                    if ri[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] for i in range(limit))
    form = SmithForm(diag, U, Ui, V, Vi, (rows, cols))
    if check if check is not None else _check_enabled():
        verify_smith(matrix, form)
    return form


def verify_smith(matrix, form):
    rows, cols = form.shape
    prod = matmul(matmul(form.U, [[int(x) for x in r] for r in matrix]), form.V) if rows and cols else []
    for i in range(rows):
        for j in range(cols):
            want = form.diag[i] if i == j else 0
            if prod[i][j] != want:
                raise AssertionError("Smith form does not satisfy U·M·V = S")
    if matmul(form.U, form.U_inv) != _identity(rows) or matmul(form.V, form.V_inv) != _identity(cols):
        raise AssertionError("Smith transforms are not unimodular")
    nz = [d for d in form.diag if d]
    if any(d < 0 for d in nz) or any(nz[k + 1] % nz[k] for k in range(len(nz) - 1)):
        raise AssertionError("Smith diagonal fails the divisibility chain")
    if 0 in form.diag and any(form.diag[form.diag.index(0):]):
        raise AssertionError("zeros must trail the Smith diagonal")
