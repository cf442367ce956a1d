"""Integer inner loops for chain-complex reduction.

Every kernel has two bodies with the same semantics: a numba-compiled one and
a plain Python one.  ``SAPC_NUMBA=0`` in the environment forces the plain
path; it is also used when numba is not importable.

Cells of a complex are numbered globally.  Boundaries come in as two CSR
structures over that numbering: ``faces`` (row c lists the faces of c with
their coefficients) and ``cofaces`` (row c lists the cells having c as a face).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    if not HAVE_NUMBA:
        return False
    flag = os.environ.get("SAPC_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


# Entries beyond this magnitude could overflow int64 in later updates.
GROWTH_LIMIT = 1 << 52


def _nofill_py(n, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val):
    alive = np.ones(n, dtype=np.bool_)
    nf = (f_ptr[1:] - f_ptr[:-1]).astype(np.int64)
    nc = (c_ptr[1:] - c_ptr[:-1]).astype(np.int64)
    cap = n + 2 * len(f_idx) + 1
    queue = np.empty(cap, dtype=np.int64)
    head = 0
    tail = 0
    for c in range(n):
        if nf[c] == 1 or nc[c] == 1:
            queue[tail] = c
            tail += 1
    sa = np.empty(n, dtype=np.int64)
    sb = np.empty(n, dtype=np.int64)
    se = np.empty(n, dtype=np.int64)
    steps = 0
    while head < tail:
        x = queue[head]
        head += 1
        if not alive[x]:
            continue
        a = -1
        b = -1
        eps = 0
        if nc[x] == 1:
            for p in range(c_ptr[x], c_ptr[x + 1]):
                g = c_idx[p]
                if alive[g]:
                    if c_val[p] == 1 or c_val[p] == -1:
                        a = g
                        b = x
                        eps = c_val[p]
                    break
        if a < 0 and nf[x] == 1:
            for p in range(f_ptr[x], f_ptr[x + 1]):
                f = f_idx[p]
                if alive[f]:
                    if f_val[p] == 1 or f_val[p] == -1:
                        a = x
                        b = f
                        eps = f_val[p]
                    break
        if a < 0:
            continue
        alive[a] = False
        alive[b] = False
        sa[steps] = a
        sb[steps] = b
        se[steps] = eps
        steps += 1
        for cell in (a, b):
            for p in range(f_ptr[cell], f_ptr[cell + 1]):
                f = f_idx[p]
                if alive[f]:
                    nc[f] -= 1
                    if nc[f] == 1:
                        queue[tail] = f
                        tail += 1
            for p in range(c_ptr[cell], c_ptr[cell + 1]):
                g = c_idx[p]
                if alive[g]:
                    nf[g] -= 1
                    if nf[g] == 1:
                        queue[tail] = g
                        tail += 1
    return sa[:steps].copy(), sb[:steps].copy(), se[:steps].copy(), alive


def _project_py(sa, sb, se, f_ptr, f_idx, f_val, deg, j, w):
    # w is a dense int64 vector over all cells; returns False on growth overflow.
    for t in range(len(sa)):
        a = sa[t]
        b = sb[t]
        if deg[b] == j:
            wb = w[b]
            if wb != 0:
                coef = se[t] * wb
                for p in range(f_ptr[a], f_ptr[a + 1]):
                    f = f_idx[p]
                    w[f] -= coef * f_val[p]
                    if w[f] > GROWTH_LIMIT or w[f] < -GROWTH_LIMIT:
                        return False
        if deg[a] == j:
            w[a] = 0
    return True


def _include_py(sa, sb, se, c_ptr, c_idx, c_val, deg, k, x):
    for t in range(len(sa) - 1, -1, -1):
        a = sa[t]
        if deg[a] != k:
            continue
        b = sb[t]
        coef = 0
        for p in range(c_ptr[b], c_ptr[b + 1]):
            coef += x[c_idx[p]] * c_val[p]
        if coef != 0:
            x[a] -= se[t] * coef
            if x[a] > GROWTH_LIMIT or x[a] < -GROWTH_LIMIT:
                return False
    return True


def _rank_mod_p_py(m, p):
    m = m % p
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(cols):
                tmp = m[rank, k]
                m[rank, k] = m[piv, k]
                m[piv, k] = tmp
        inv = 1
        base = m[rank, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for k in range(cols):
            m[rank, k] = (m[rank, k] * inv) % p
        for i in range(rows):
            if i != rank and m[i, c] != 0:
                factor = m[i, c]
                for k in range(cols):
                    m[i, k] = (m[i, k] - factor * m[rank, k]) % p
        rank += 1
    return rank


if HAVE_NUMBA:
    _nofill_nb = njit(cache=True)(_nofill_py)
    _project_nb = njit(cache=True)(_project_py)
    _include_nb = njit(cache=True)(_include_py)
    _rank_mod_p_nb = njit(cache=True)(_rank_mod_p_py)


def nofill_reduce(n, faces, cofaces):
    """Greedy collapses and coreductions that never create fill-in.

    Returns step arrays (a, b, eps) in elimination order and the mask of
    surviving cells.  ``faces`` and ``cofaces`` are (indptr, indices, data).
    """
    args = (n, *faces, *cofaces)
    if numba_enabled():
        return _nofill_nb(*args)
    return _nofill_py(*args)


def project(steps, faces, deg, j, w):
    """Apply the reduction's projection to a degree-j vector, in place."""
    fn = _project_nb if numba_enabled() else _project_py
    return fn(*steps, *faces, deg, j, w)


def include(steps, cofaces, deg, k, x):
    """Apply the reduction's inclusion to a degree-k vector, in place."""
    fn = _include_nb if numba_enabled() else _include_py
    return fn(*steps, *cofaces, deg, k, x)


def rank_mod_p(m, p):
    m = np.array(m, dtype=np.int64)
    if m.size == 0:
        return 0
    if numba_enabled():
        return int(_rank_mod_p_nb(m, np.int64(p)))
    return int(_rank_mod_p_py(m, p))
