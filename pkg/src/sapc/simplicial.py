"""Finite ordered simplicial complexes, oriented manifolds and open-star lattices.

Simplices are strictly increasing vertex tuples.  Each complex numbers its
simplices globally by (dimension, lexicographic order); that number is the
bit position used when an open set (an up-closed set of simplices) is stored
as a Python int bitmask.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .chaincore import ChainComplex, ChainMap
from .errors import (
    InconsistentOrientation,
    NonManifoldLink,
    NotClosedUnderFaces,
    NotSimplicial,
    PosetTooLarge,
    SchemaError,
    UnknownSimplex,
)


def faces_of(s):
    """Codimension-one faces of s, i-th face drops vertex i."""
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def closure(tops: Iterable[Sequence[int]]):
    out = set()
    for t in tops:
        t = tuple(t)
        for k in range(1, len(t) + 1):
            out.update(itertools.combinations(t, k))
    return out


class SimplicialComplex:
    def __init__(self, vertex_count: int, simplices: Iterable[Sequence[int]], vertex_labels=None, check=True):
        simplices = {tuple(int(v) for v in s) for s in simplices}
        if check:
            for s in simplices:
                if not s or any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
                    raise NotClosedUnderFaces(f"simplex {s} is not a strictly increasing vertex tuple")
                if s[0] < 0 or s[-1] >= vertex_count:
                    raise NotClosedUnderFaces(f"simplex {s} uses a vertex outside 0..{vertex_count - 1}")
                if len(s) > 1:
                    for f in faces_of(s):
                        if f not in simplices:
                            raise NotClosedUnderFaces(f"face {f} of {s} is missing")
        self.vertex_count = int(vertex_count)
        self.dim = max((len(s) for s in simplices), default=0) - 1
        by = [[] for _ in range(self.dim + 1)]
        for s in simplices:
            by[len(s) - 1].append(s)
        for lst in by:
            lst.sort()
        self.by_dim = by
        self.offsets = []
        pos = 0
        for lst in by:
            self.offsets.append(pos)
            pos += len(lst)
        self.size = pos
        self.index = {s: i for lst in by for i, s in enumerate(lst)}
        self.vertex_labels = list(vertex_labels) if vertex_labels is not None else None

    @classmethod
    def from_top(cls, vertex_count, tops, vertex_labels=None):
        return cls(vertex_count, closure(tops), vertex_labels)

    @classmethod
    def simplex(cls, n):
        return cls.from_top(n + 1, [tuple(range(n + 1))])

    def simplices(self, k):
        if 0 <= k <= self.dim:
            return self.by_dim[k]
        return []

    @property
    def f_vector(self):
        return tuple(len(x) for x in self.by_dim)

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def __contains__(self, s):
        return tuple(s) in self.index

    def gid(self, s):
        s = tuple(s)
        try:
            return self.offsets[len(s) - 1] + self.index[s]
        except (KeyError, IndexError):
            raise UnknownSimplex(f"{s} is not a simplex of this complex") from None

    @cached_property
    def all_simplices(self):
        return [s for lst in self.by_dim for s in lst]

    @cached_property
    def dims(self):
        return np.array([len(s) - 1 for s in self.all_simplices], dtype=np.int64)

    @cached_property
    def chain_complex(self) -> ChainComplex:
        ranks = {k: len(v) for k, v in enumerate(self.by_dim)}
        bds = {}
        for k in range(1, self.dim + 1):
            idx = self.index
            rows, cols, vals = [], [], []
            for j, s in enumerate(self.by_dim[k]):
                for i, f in enumerate(faces_of(s)):
                    rows.append(idx[f])
                    cols.append(j)
                    vals.append(-1 if i % 2 else 1)
            bds[k] = sp.csc_matrix((vals, (rows, cols)), shape=(ranks[k - 1], ranks[k]), dtype=np.int64)
        labels = {k: list(v) for k, v in enumerate(self.by_dim)}
        return ChainComplex(ranks, bds, labels)

    # -- face poset -------------------------------------------------------

    @cached_property
    def star_masks(self):
        """Bitmask of the open star (all cofaces, itself included) of each simplex."""
        masks = [0] * self.size
        for s in reversed(self.all_simplices):
            g = self.gid(s)
            masks[g] |= 1 << g
            if len(s) > 1:
                for f in faces_of(s):
                    masks[self.gid(f)] |= masks[g]
        return masks

    @cached_property
    def closure_masks(self):
        masks = [0] * self.size
        for s in self.all_simplices:
            g = self.gid(s)
            m = 1 << g
            if len(s) > 1:
                for f in faces_of(s):
                    m |= masks[self.gid(f)]
            masks[g] = m
        return masks

    def star(self, s):
        return self.star_masks[self.gid(s)]

    def subcomplex(self, simplices):
        return SimplicialComplex(self.vertex_count, closure(simplices), self.vertex_labels)


def permutation_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class OrientedManifoldComplex:
    """Triangulated oriented n-manifold, possibly with boundary."""

    def __init__(self, base: SimplicialComplex, signs, n=None, name="", boundary_marked=None):
        self.base = base
        self.n = base.dim if n is None else int(n)
        self.name = name
        tops = base.simplices(self.n)
        if len(tops) == 0:
            raise NonManifoldLink("no top-dimensional simplices")
        self.signs = np.asarray(signs, dtype=np.int64)
        if self.signs.shape != (len(tops),) or not np.all(np.abs(self.signs) == 1):
            raise InconsistentOrientation("need one ±1 sign per top simplex")
        free = check_pseudomanifold(base, self.n)
        if boundary_marked is False and free:
            raise NonManifoldLink(f"free face {free[0]} in a complex declared closed")
        self.boundary_faces = free
        self.boundary = SimplicialComplex(base.vertex_count, closure(free), base.vertex_labels) if free else None
        self._check_orientation()

    @property
    def is_closed(self):
        return self.boundary is None

    def _check_orientation(self):
        if self.n == 0:
            return
        induced = {}
        for s, e in zip(self.base.simplices(self.n), self.signs):
            for i, f in enumerate(faces_of(s)):
                induced[f] = induced.get(f, 0) + (-e if i % 2 else e)
        bset = set(self.boundary_faces)
        for f, total in induced.items():
            if f in bset:
                continue
            if total != 0:
                raise InconsistentOrientation(f"interior face {f} does not cancel")

    def fundamental_cycle(self):
        return self.signs.copy()

    def boundary_of_fundamental_cycle(self):
        return self.base.chain_complex.boundary(self.n) @ self.signs

    def reversed(self):
        return OrientedManifoldComplex(self.base, -self.signs, self.n, self.name + "~")

    def boundary_manifold(self):
        """∂M oriented so that its fundamental cycle is ∂ω."""
        if self.boundary is None:
            return None
        bw = self.boundary_of_fundamental_cycle()
        signs = [int(bw[self.base.index[f]]) for f in self.boundary.simplices(self.n - 1)]
        return OrientedManifoldComplex(self.boundary, signs, self.n - 1, self.name + ".boundary")

    def __repr__(self):
        kind = "closed" if self.is_closed else "with boundary"
        return f"OrientedManifoldComplex({self.name!r}, n={self.n}, f={self.base.f_vector}, {kind})"


def check_pseudomanifold(X: SimplicialComplex, n: int):
    """Validate purity and the 1-or-2 incidence rule; return the free (n−1)-faces."""
    tops = X.simplices(n)
    covered = set()
    for s in tops:
        covered.update(closure([s]))
    missing = [s for s in X.all_simplices if s not in covered]
    if missing:
        raise NonManifoldLink(f"simplex {missing[0]} is not a face of any top simplex")
    if n == 0:
        return []
    count = {}
    for s in tops:
        for f in faces_of(s):
            count[f] = count.get(f, 0) + 1
    bad = [f for f, c in count.items() if c > 2]
    if bad:
        raise NonManifoldLink(f"(n-1)-simplex {bad[0]} lies in {count[bad[0]]} top simplices")
    return sorted(f for f, c in count.items() if c == 1)


def propagate_orientation(X: SimplicialComplex, n: int):
    """Greedy orientation by breadth-first search; +1 on the first simplex of each component."""
    tops = X.simplices(n)
    if n == 0:
        return [1] * len(tops)
    by_face = {}
    for j, s in enumerate(tops):
        for i, f in enumerate(faces_of(s)):
            by_face.setdefault(f, []).append((j, -1 if i % 2 else 1))
    signs = [0] * len(tops)
    for start in range(len(tops)):
        if signs[start]:
            continue
        signs[start] = 1
        queue = deque([start])
        while queue:
            j = queue.popleft()
            s = tops[j]
            for i, f in enumerate(faces_of(s)):
                mine = signs[j] * (-1 if i % 2 else 1)
                for other, inc in by_face[f]:
                    if other == j:
                        continue
                    want = -mine * inc
                    if signs[other] == 0:
                        signs[other] = want
                        queue.append(other)
                    elif signs[other] != want:
                        raise InconsistentOrientation(f"orientation conflict across face {f}")
    return signs


TRIANGULATION_SCHEMA = {
    "type": "object",
    "required": ["name", "vertices", "top_simplices", "boundary_marked"],
    "properties": {
        "name": {"type": "string"},
        "vertices": {"type": "integer", "minimum": 1},
        "top_simplices": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
        },
        "orientation_signs": {"type": "array", "items": {"enum": [1, -1]}},
        "boundary_marked": {"type": "boolean"},
    },
}


def validate_document(doc):
    import jsonschema

    validator = jsonschema.Draft7Validator(TRIANGULATION_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "".join(f"/{p}" for p in err.absolute_path)
        raise SchemaError(pointer, err.message)
    nv = doc["vertices"]
    for i, t in enumerate(doc["top_simplices"]):
        for j, v in enumerate(t):
            if v >= nv:
                raise SchemaError(f"/top_simplices/{i}/{j}", f"vertex {v} out of range 0..{nv - 1}")
        if len(set(t)) != len(t):
            raise SchemaError(f"/top_simplices/{i}", "repeated vertex in simplex")
    signs = doc.get("orientation_signs")
    if signs is not None and len(signs) != len(doc["top_simplices"]):
        raise SchemaError("/orientation_signs", "need exactly one sign per top simplex")


def _document_tops(doc):
    validate_document(doc)
    tops_raw = [tuple(t) for t in doc["top_simplices"]]
    dims = {len(t) for t in tops_raw}
    if len(dims) != 1:
        raise NonManifoldLink("top simplices have different dimensions")
    n = dims.pop() - 1
    tops = [tuple(sorted(t)) for t in tops_raw]
    if len(set(tops)) != len(tops):
        raise NotClosedUnderFaces("a top simplex is listed twice")
    X = SimplicialComplex.from_top(doc["vertices"], tops)
    if X.simplices(0) and len(X.simplices(0)) != doc["vertices"]:
        raise NonManifoldLink("some vertex lies in no top simplex")
    listed = set(X.simplices(n))
    for t in tops:
        if t not in listed:
            raise NotClosedUnderFaces(f"{t} is a face of another listed simplex")
    check_pseudomanifold(X, n)
    return X, n, tops_raw, tops


def load_simplicial(doc) -> SimplicialComplex:
    """Validated pseudomanifold of a document, orientation ignored (e.g. for RP²)."""
    return _document_tops(doc)[0]


def load_complex(doc) -> OrientedManifoldComplex:
    """Build and validate an oriented manifold from a triangulation document.

    Given signs refer to the document's simplex order; a simplex listed with
    vertices out of order is sorted and its sign adjusted by the permutation.
    """
    X, n, tops_raw, tops = _document_tops(doc)
    given = doc.get("orientation_signs")
    if given is None:
        signs = propagate_orientation(X, n)
    else:
        order = {t: j for j, t in enumerate(X.simplices(n))}
        signs = [0] * len(tops)
        for raw, s, e in zip(tops_raw, tops, given):
            signs[order[s]] = int(e) * permutation_sign(raw)
    return OrientedManifoldComplex(X, signs, n, doc["name"], boundary_marked=doc["boundary_marked"])


def to_document(M: OrientedManifoldComplex):
    return {
        "name": M.name,
        "vertices": M.base.vertex_count,
        "top_simplices": [list(s) for s in M.base.simplices(M.n)],
        "orientation_signs": [int(e) for e in M.signs],
        "boundary_marked": not M.is_closed,
    }


def chain_complex_of(X: SimplicialComplex) -> ChainComplex:
    return X.chain_complex


def fundamental_cycle(M: OrientedManifoldComplex):
    return M.fundamental_cycle()


# -- products -------------------------------------------------------------


def staircases(p, q):
    """Monotone lattice paths from (0,0) to (p,q) with their shuffle signs."""
    for xs in itertools.combinations(range(p + q), p):
        path = [(0, 0)]
        x = y = 0
        xset = set(xs)
        for t in range(p + q):
            if t in xset:
                x += 1
            else:
                y += 1
            path.append((x, y))
        # shuffle sign: X-steps moved to the front
        sign = (-1) ** sum(pos - i for i, pos in enumerate(xs))
        yield path, sign


def product_complex(X: OrientedManifoldComplex, Y: OrientedManifoldComplex) -> OrientedManifoldComplex:
    nY = Y.base.vertex_count
    p, q = X.n, Y.n
    tops = []
    signs = []
    paths = list(staircases(p, q))
    for s, es in zip(X.base.simplices(p), X.signs):
        for t, et in zip(Y.base.simplices(q), Y.signs):
            for path, sh in paths:
                tops.append(tuple(s[i] * nY + t[j] for i, j in path))
                signs.append(int(sh * es * et))
    labels = [(i, j) for i in range(X.base.vertex_count) for j in range(nY)]
    base = SimplicialComplex.from_top(X.base.vertex_count * nY, tops, vertex_labels=labels)
    order = {t: k for k, t in enumerate(base.simplices(p + q))}
    ordered = [0] * len(tops)
    for t, e in zip(tops, signs):
        ordered[order[t]] = e
    used = sorted({v for t in tops for v in t})
    if len(used) != base.vertex_count:
        base, ordered = _compact_vertices(base, tops, signs, labels, p + q)
    return OrientedManifoldComplex(base, ordered, p + q, f"{X.name}x{Y.name}")


def _compact_vertices(base, tops, signs, labels, n):
    used = sorted({v for t in tops for v in t})
    remap = {v: i for i, v in enumerate(used)}
    new_tops = [tuple(remap[v] for v in t) for t in tops]
    nb = SimplicialComplex.from_top(len(used), new_tops, vertex_labels=[labels[v] for v in used])
    order = {t: k for k, t in enumerate(nb.simplices(n))}
    ordered = [0] * len(new_tops)
    for t, e in zip(new_tops, signs):
        ordered[order[t]] = e
    return nb, ordered


def eilenberg_zilber(X: SimplicialComplex, Y: SimplicialComplex, P: SimplicialComplex):
    """Shuffle map on basis pairs: (σ, τ) ↦ signed sum of staircase simplices of P."""
    nY = Y.vertex_count
    labels = P.vertex_labels
    pos = {lab: i for i, lab in enumerate(labels)} if labels is not None else None

    def vid(i, j):
        return pos[(i, j)] if pos is not None else i * nY + j

    def ez(s, t):
        out = {}
        for path, sh in staircases(len(s) - 1, len(t) - 1):
            simp = tuple(vid(s[i], t[j]) for i, j in path)
            out[simp] = out.get(simp, 0) + sh
        return out

    return ez


# -- subdivision ------------------------------------------------------------


class Subdivision:
    """Barycentric subdivision; vertex g of sd(X) is the barycentre of simplex gid g."""

    def __init__(self, X: SimplicialComplex):
        self.X = X
        flags = []
        ending = [None] * X.size
        for s in X.all_simplices:
            g = X.gid(s)
            here = [(g,)]
            if len(s) > 1:
                seen = set()
                for k in range(1, len(s)):
                    for f in itertools.combinations(s, k):
                        seen.add(X.gid(f))
                for h in sorted(seen):
                    here.extend(fl + (g,) for fl in ending[h])
            ending[g] = here
            flags.extend(here)
        self.sd = SimplicialComplex(X.size, flags, vertex_labels=list(X.all_simplices), check=False)
        self._memo = {}

    def chain(self, s):
        """sd(s) as a dict flag → coefficient (cone construction from barycentres)."""
        s = tuple(s)
        hit = self._memo.get(s)
        if hit is not None:
            return hit
        g = self.X.gid(s)
        if len(s) == 1:
            out = {(g,): 1}
        else:
            out = {}
            for i, f in enumerate(faces_of(s)):
                e = -1 if i % 2 else 1
                for fl, c in self.chain(f).items():
                    # cone with apex first, then reorder apex to the end
                    sign = -1 if len(fl) % 2 else 1
                    key = fl + (g,)
                    out[key] = out.get(key, 0) + e * c * sign
            out = {k: v for k, v in out.items() if v}
        self._memo[s] = out
        return out

    def chain_map(self) -> ChainMap:
        X, S = self.X, self.sd
        comps = {}
        for k in range(X.dim + 1):
            rows, cols, vals = [], [], []
            for j, s in enumerate(X.simplices(k)):
                for fl, c in self.chain(s).items():
                    rows.append(S.index[fl])
                    cols.append(j)
                    vals.append(c)
            comps[k] = sp.csc_matrix((vals, (rows, cols)), shape=(len(S.simplices(k)), len(X.simplices(k))), dtype=np.int64)
        return ChainMap(X.chain_complex, S.chain_complex, comps)

    def manifold(self, M: OrientedManifoldComplex) -> OrientedManifoldComplex:
        S = self.sd
        signs = np.zeros(len(S.simplices(M.n)), dtype=np.int64)
        for s, e in zip(M.base.simplices(M.n), M.signs):
            for fl, c in self.chain(s).items():
                signs[S.index[fl]] += e * c
        return OrientedManifoldComplex(S, signs, M.n, M.name + ".sd")


def barycentric_subdivision(X: SimplicialComplex) -> Subdivision:
    return Subdivision(X)


# -- simplicial maps --------------------------------------------------------


class SimplicialMap:
    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Sequence[int]):
        if len(vertex_map) != source.vertex_count:
            raise NotSimplicial("vertex map must cover every source vertex")
        self.source = source
        self.target = target
        self.vertex_map = [int(v) for v in vertex_map]
        for s in source.all_simplices:
            if self.image(s) not in target:
                raise NotSimplicial(f"image of {s} is not a simplex of the target")

    def image(self, s):
        return tuple(sorted({self.vertex_map[v] for v in s}))

    @cached_property
    def image_gid(self):
        return np.array([self.target.gid(self.image(s)) for s in self.source.all_simplices], dtype=np.int64)

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """self ∘ first."""
        return SimplicialMap(first.source, self.target, [self.vertex_map[v] for v in first.vertex_map])

    @classmethod
    def identity(cls, X):
        return cls(X, X, list(range(X.vertex_count)))

    @classmethod
    def constant(cls, X, target=None):
        target = target or SimplicialComplex(1, [(0,)])
        return cls(X, target, [0] * X.vertex_count)

    def chain_map(self) -> ChainMap:
        X, Y = self.source, self.target
        comps = {}
        for k in range(X.dim + 1):
            rows, cols, vals = [], [], []
            for j, s in enumerate(X.simplices(k)):
                img = [self.vertex_map[v] for v in s]
                if len(set(img)) < len(img):
                    continue
                rows.append(Y.index[tuple(sorted(img))])
                cols.append(j)
                vals.append(permutation_sign(img))
            comps[k] = sp.csc_matrix((vals, (rows, cols)), shape=(len(Y.simplices(k)), len(X.simplices(k))), dtype=np.int64)
        return ChainMap(X.chain_complex, Y.chain_complex, comps)


# -- open families ------------------------------------------------------------


def mask_to_bool(mask: int, size: int) -> np.ndarray:
    if size == 0:
        return np.zeros(0, dtype=bool)
    raw = mask.to_bytes((size + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:size].astype(bool)


def bool_to_mask(arr) -> int:
    arr = np.asarray(arr, dtype=bool)
    packed = np.packbits(arr, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class OpenFamily:
    """Finite lattice of opens generated by stars of seed simplex sets.

    Opens are up-closed sets of simplices, held as bitmasks over gids.  The
    full lattice is enumerated lazily and only on request (``lattice``); the
    meet-closed ``basis`` (all finite intersections of seeds, plus ∅ and X)
    is always small.
    """

    def __init__(self, X: SimplicialComplex, seeds, cap=20000, name="custom"):
        self.X = X
        self.cap = int(cap)
        self.name = name
        self.full = (1 << X.size) - 1
        self.seed_opens = []
        for seed in seeds:
            simplices = [seed] if _is_simplex(seed) else list(seed)
            m = 0
            for s in simplices:
                m |= X.star(tuple(s))
            self.seed_opens.append(m)
        self._lattice = None

    @property
    def size(self):
        return self.X.size

    def star(self, s):
        return self.X.star(tuple(s))

    def up_closure(self, simplices):
        m = 0
        for s in simplices:
            m |= self.X.star(tuple(s))
        return m

    def is_open(self, mask):
        stars = self.X.star_masks
        return all((stars[g] & ~mask) == 0 for g in iter_bits(mask))

    def smallest_open_containing(self, s):
        """Smallest open containing the closed simplex: the union of its vertex stars."""
        s = tuple(s)
        self.X.gid(s)
        return self.up_closure([(v,) for v in s])

    def max_closed_subcomplex_in(self, mask):
        """Largest subcomplex inside the open set (as a down-closed bitmask)."""
        closed = self.X.closure_masks
        out = 0
        for g in iter_bits(mask):
            if closed[g] & ~mask == 0:
                out |= 1 << g
        return out

    def complement(self, mask):
        return self.full & ~mask

    def minimal_elements(self, mask):
        stars = self.X.star_masks
        out = []
        for g in iter_bits(mask):
            if not any(h != g and (stars[h] >> g) & 1 for h in iter_bits(mask) if self.X.dims[h] < self.X.dims[g]):
                out.append(g)
        return out

    def label(self, mask):
        if mask == 0:
            return "empty"
        if mask == self.full:
            return "X"
        simp = self.X.all_simplices
        parts = ["(" + ",".join(map(str, simp[g])) + ")" for g in self.minimal_elements(mask)]
        return "up" + "".join(parts)

    def basis(self):
        """Meet-closure of the seeds together with ∅ and X, in a fixed order."""
        found = {0, self.full}
        frontier = [m for m in self.seed_opens if m]
        found.update(frontier)
        while frontier:
            new = []
            for a in frontier:
                for b in self.seed_opens:
                    c = a & b
                    if c not in found:
                        found.add(c)
                        new.append(c)
            frontier = new
        return self._sorted(found)

    def lattice(self, cap=None):
        """All opens generated by the seeds under ∪ and ∩; PosetTooLarge past the cap."""
        cap = self.cap if cap is None else int(cap)
        if self._lattice is not None and len(self._lattice) <= cap:
            return self._lattice
        found = set(self.basis())
        frontier = list(found)
        while frontier:
            new = []
            current = list(found)
            for a in frontier:
                for b in current:
                    for c in (a | b, a & b):
                        if c not in found:
                            found.add(c)
                            new.append(c)
                            if len(found) > cap:
                                raise PosetTooLarge(len(found), cap, "open lattice")
            frontier = new
        self._lattice = self._sorted(found)
        return self._lattice

    def generates_all_upsets(self):
        """True when every vertex star is a seed, so the lattice is every up-closed set."""
        seeds = set(self.seed_opens)
        stars = self.X.star_masks
        return all(stars[self.X.gid(v)] in seeds for v in self.X.simplices(0))

    def count_opens(self, max_states=1_000_000):
        """Exact lattice size by up-set recursion, or None if the family is not
        vertex-star generated or the memo outgrows ``max_states``."""
        if not self.generates_all_upsets():
            return None
        up, down = self.X.star_masks, self.X.closure_masks
        memo = {0: 1}

        def count(rem):
            hit = memo.get(rem)
            if hit is not None:
                return hit
            if len(memo) > max_states:
                raise OverflowError
            x = (rem & -rem).bit_length() - 1  # lowest gid is minimal among what is left
            memo[rem] = out = count(rem & ~up[x]) + count(rem & ~down[x])
            return out

        import sys

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * self.size + 100))
        try:
            return count(self.full)
        except OverflowError:
            return None
        finally:
            sys.setrecursionlimit(limit)

    def opens_for_certificate(self, cap=None):
        """The full lattice when it fits under the cap, else the meet-closed basis."""
        try:
            return "lattice", self.lattice(cap)
        except PosetTooLarge:
            return "basis", self.basis()

    def _sorted(self, masks):
        return sorted(masks, key=lambda m: (bin(m).count("1"), m))


def _is_simplex(seed):
    return len(seed) > 0 and all(isinstance(v, (int, np.integer)) for v in seed)


def open_star_family(X: SimplicialComplex, seeds, cap=20000, name="custom") -> OpenFamily:
    for seed in seeds:
        simplices = [seed] if _is_simplex(seed) else list(seed)
        for s in simplices:
            if tuple(s) not in X:
                raise UnknownSimplex(f"seed {tuple(s)} is not a simplex")
    return OpenFamily(X, seeds, cap, name)


def star_family(X: SimplicialComplex, kind="stars", cap=20000) -> OpenFamily:
    if kind == "stars":
        seeds = [s for s in X.simplices(0)]
    elif kind == "stars-and-edges":
        seeds = [s for s in X.simplices(0)] + [s for s in X.simplices(1)]
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    return OpenFamily(X, seeds, cap, kind)
