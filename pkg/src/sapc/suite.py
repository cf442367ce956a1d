"""The acceptance battery as a library: one function per criterion, aggregated by ``run_suite``.

Every verdict and detail is deterministic; wall-clock timings and time-budget
checks go to the report's ``metadata`` block only.
"""

from __future__ import annotations

import itertools
import platform
import time

import numpy as np

from . import __version__, corpus
from .chaincore import ChainComplex
from .equivariant import InvolutiveComplex, NormMap, check_steenrod_relation
from .localsheaf import box_economy, core_closed_sets, descent_check, excision_square_check, guide_object
from .shadows import (
    collapse_check,
    interval_pair,
    metabolic_boundary_equation,
    metabolic_pair,
    octahedron,
    pushforward_check,
    suspension_check,
)
from .simplicial import OpenFamily, SimplicialMap, product_complex, star_family
from .symmetric import (
    is_nondegenerate,
    product_sapc,
    relative_certificate,
    reversed_sapc,
    sap_pair_from_manifold_with_boundary,
    sapc_from_manifold,
    signature,
    signature_report,
)

EXPECTED_HOMOLOGY = {
    "s2": [(1, []), (0, []), (1, [])],
    "s4": [(1, []), (0, []), (0, []), (0, []), (1, [])],
    "t2_7": [(1, []), (2, []), (1, [])],
    "rp2_6": [(1, []), (0, [2]), (0, [])],
}

TIME_BUDGETS = {1: 1.0, 2: 30.0, 3: 120.0}


class _Context:
    """Shared, lazily built symmetric complexes so criteria do not rebuild them."""

    def __init__(self, window=2, cap=20000, jobs=1):
        self.window, self.cap, self.jobs = window, cap, jobs
        self._sc = {}

    def sapc(self, name, certify=False):
        key = (name, certify)
        if key not in self._sc:
            if certify and (name, False) in self._sc:
                sc = self._sc[(name, False)]
                ok, cert = is_nondegenerate(sc, cap=self.cap, jobs=self.jobs, spot_checks=8)
                sc.certificate = cert
            else:
                sc = sapc_from_manifold(corpus.load(name), window=self.window, certify=certify, cap=self.cap, jobs=self.jobs)
            self._sc[key] = sc
            self._sc[(name, False)] = sc
        return self._sc[key]


def _homology(C, top):
    return [C.homology(k).as_dict() for k in range(top + 1)]


def criterion_homology(ctx):
    details, timings = {}, {}
    ok = True
    for name, expected in EXPECTED_HOMOLOGY.items():
        t = time.perf_counter()
        X = corpus.load_unoriented(name)
        got = _homology(X.chain_complex, X.dim)
        timings[name] = time.perf_counter() - t
        want = [{"betti": b, "torsion": tors} for b, tors in expected]
        details[name] = {"homology": got, "match": got == want}
        ok &= got == want
    return ok, details, timings


def criterion_signatures(ctx):
    details, timings = {}, {}
    t = time.perf_counter()
    s4 = signature(ctx.sapc("s4"))
    timings["s4"] = time.perf_counter() - t
    t = time.perf_counter()
    cp = ctx.sapc("cp2_9")
    cp_sig, cp_rev = signature(cp), signature(reversed_sapc(cp))
    timings["cp2_9"] = time.perf_counter() - t
    t = time.perf_counter()
    s2 = ctx.sapc("s2")
    alg = signature_report(product_sapc(s2, s2))
    M = corpus.load("s2")
    tri = signature_report(sapc_from_manifold(product_complex(M, M), window=0, certify=False))
    timings["s2xs2"] = time.perf_counter() - t
    details = {
        "s4": s4,
        "cp2_9": cp_sig,
        "cp2_9_reversed": cp_rev,
        "s2xs2_product": alg.as_dict(),
        "s2xs2_triangulated": tri.as_dict(),
    }
    ok = (
        s4 == 0
        and cp_sig == 1
        and cp_rev == -1
        and alg.signature == 0
        and alg.hyperbolic
        and alg.rank == 2
        and tri.signature == 0
        and tri.hyperbolic
    )
    return ok, details, timings


def criterion_duality(ctx):
    details, timings = {}, {}
    ok = True
    for name in ("s2", "t2_7", "cp2_9"):
        t = time.perf_counter()
        cert = ctx.sapc(name, certify=True).certificate
        timings[name] = time.perf_counter() - t
        details[name] = {
            "coverage": cert.coverage,
            "lattice_size": cert.lattice_size,
            "opens": len(cert.entries),
            "failing": cert.failing(),
            "overall": cert.overall,
        }
        ok &= cert.overall
    return ok, details, timings


def criterion_equivariance(ctx):
    details = {}
    ok = True
    for name in corpus.NAMES:
        X = corpus.load_unoriented(name)
        bad = check_steenrod_relation(X, 3)
        details[name] = {"simplices": X.size, "failures": len(bad)}
        ok &= not bad
    M = corpus.load("s2")
    boxes = {
        "hemispheres": [[(0,), (1,)], [(2,), (3,)]],
        "vertex_stars": [[(0,)], [(1,), (2,), (3,)]],
    }
    for label, seeds in boxes.items():
        fam = OpenFamily(M.base, seeds)
        G = guide_object(SimplicialMap.identity(M.base), fam)
        box = box_economy(G, G, 2, 1, closed=core_closed_sets(fam, fam.basis()))
        tau = box.check_tau()
        details[f"box_{label}"] = {"triples": len(box.triples), "tau_involution": tau}
        ok &= tau
    return ok, details, {}


def random_covers(family, count, seed):
    """(mode, opens) pairs: 2–3 random basis opens closed under ∩ (codescent) or ∪ (descent)."""
    rng = np.random.default_rng(seed)
    basis = [U for U in family.basis() if U not in (0, family.full)]
    out = []
    for i in range(count):
        k = int(rng.integers(2, 4))
        pick = [basis[int(j)] for j in rng.choice(len(basis), size=min(k, len(basis)), replace=False)]
        mode = "codescent" if i % 2 == 0 else "descent"
        W = set(pick)
        op = (lambda a, b: a & b) if mode == "codescent" else (lambda a, b: a | b)
        while True:
            new = {op(a, b) for a in W for b in W} - W
            if not new:
                break
            W |= new
        out.append((mode, sorted(W)))
    return out


def criterion_descent(ctx, seed=20240):
    details = {}
    total = passed = 0
    for idx, name in enumerate(("s2", "t2_7", "rp2_6", "d2_hemisphere", "s4")):
        X = corpus.load_unoriented(name)
        fam = star_family(X, "stars", ctx.cap)
        G = guide_object(SimplicialMap.identity(X), fam)
        rows = []
        for mode, W in random_covers(fam, 5, seed + idx):
            r = descent_check(G, W, mode)
            rows.append({"mode": mode, "opens": len(W), "overall": r["overall"]})
            total += 1
            passed += r["overall"]
        details[name] = rows
    details["covers"] = total
    details["passed"] = passed
    return total >= 20 and passed == total, details, {}


def criterion_excision(ctx):
    details = {}
    ok = True
    splits = {
        "s2_hemispheres": ("s2", (0, 1, 2), (1, 2, 3)),
        "t2_halves": ("t2_7", (0, 1, 2, 3), (3, 4, 5, 6)),
    }
    for label, (name, a, b) in splits.items():
        X = corpus.load_unoriented(name)
        fam = star_family(X, "stars", ctx.cap)
        G = guide_object(SimplicialMap.identity(X), fam)
        U = fam.up_closure([(v,) for v in a])
        V = fam.up_closure([(v,) for v in b])
        r = excision_square_check(G, U, V)
        details[label] = {
            "mayer_vietoris_exact": r["mayer_vietoris_exact"],
            "pushout": r["pushout"],
            "relative_quasi_iso": r["relative_quasi_iso"],
        }
        ok &= r["overall"]
    return ok, details, {}


def criterion_bordism(ctx):
    details = {}
    ok = True
    for name in ("d4", "d2_hemisphere"):
        pair = sap_pair_from_manifold_with_boundary(corpus.load(name), window=ctx.window, certify=False)
        rel = relative_certificate(pair).overall
        sig = signature(pair.boundary())
        details[name] = {"boundary_signature": sig, "relative_nondegenerate": rel}
        ok &= sig == 0 and rel
    I = interval_pair(ctx.window)
    for name in ("s2", "cp2_9"):
        Q = product_sapc(ctx.sapc(name), I)
        rep = signature_report(Q.boundary())
        details[f"{name}xI"] = {"boundary_equation": Q.boundary_defects() == [], **rep.as_dict()}
        ok &= rep.signature == 0 and Q.boundary_defects() == []
    Q = product_sapc(product_sapc(ctx.sapc("s2"), ctx.sapc("s2")), I)
    rep = signature_report(Q.boundary())
    details["s2xs2xI"] = {"boundary_equation": Q.boundary_defects() == [], **rep.as_dict()}
    ok &= rep.signature == 0 and Q.boundary_defects() == []
    meta = []
    for seed in range(5):
        sc, F, G = metabolic_pair(2 + seed % 3, k=1 + seed % 2, seed=seed)
        row = {
            "rank": len(G),
            "boundary_equation": metabolic_boundary_equation(F, G),
            "signature": signature(sc),
            "nondegenerate": is_nondegenerate(sc)[0],
        }
        meta.append(row)
        ok &= row["boundary_equation"] and row["signature"] == 0 and row["nondegenerate"]
    details["metabolic"] = meta
    names = ("s4", "cp2_9")
    pool = {n: ctx.sapc(n) for n in names}
    pool["cp2_9~"] = reversed_sapc(pool["cp2_9"])
    mult = []
    for a, b in itertools.product(sorted(pool), repeat=2):
        sa, sb = pool[a], pool[b]
        prod = signature(product_sapc(sa, sb, materialize=False))
        expect = signature(sa) * signature(sb)
        mult.append({"a": a, "b": b, "signature": prod, "expected": expect})
        ok &= prod == expect
    details["multiplicativity"] = mult
    return ok, details, {}


def criterion_shadows(ctx):
    details = {}
    susp = suspension_check(ctx.sapc("cp2_9"))
    details["suspension_cp2_9"] = susp
    ok = susp["same_form"] and susp["signature"] == susp["suspended_signature"] and susp["boundary_equation"]
    susp4 = suspension_check(ctx.sapc("s4"))
    details["suspension_s4"] = susp4
    ok &= susp4["same_form"] and susp4["signature"] == susp4["suspended_signature"]
    col = collapse_check(corpus.load("s2"), corpus.load("d2_hemisphere"), window=ctx.window)
    details["collapse_hemisphere"] = col
    ok &= col["overall"]
    cert = pushforward_check(octahedron(), 0, 2, cap=ctx.cap)
    details["pushforward_octahedron"] = {"coverage": cert.coverage, "opens": len(cert.entries), "overall": cert.overall}
    ok &= cert.overall
    return ok, details, {}


def criterion_norm(ctx):
    X = corpus.load_unoriented("s2")
    D = InvolutiveComplex.tensor_square(X.chain_complex)
    degrees = {}
    for n in range(0, 5):
        N = NormMap(D, n)
        degrees[n] = {"iso_half": N.is_iso(invert_two=True), "iso": N.is_iso()}
    Z = InvolutiveComplex.trivial(ChainComplex({0: 1}))
    N = NormMap(Z, 0)
    _, _, M = N.homology_matrix()
    trivial = {"matrix": [[int(x) for x in row] for row in M], "iso": N.is_iso(), "iso_half": N.is_iso(invert_two=True)}
    ok = all(d["iso_half"] for d in degrees.values()) and trivial == {"matrix": [[2]], "iso": False, "iso_half": True}
    return ok, {"s2_tensor_square": degrees, "trivial_module": trivial}, {}


CRITERIA = [
    (1, "homology corpus", criterion_homology),
    (2, "signature battery", criterion_signatures),
    (3, "local duality certificates", criterion_duality),
    (4, "equivariance", criterion_equivariance),
    (5, "descent and codescent", criterion_descent),
    (6, "excision", criterion_excision),
    (7, "bordism and products", criterion_bordism),
    (8, "suspension and collapse", criterion_shadows),
    (9, "norm map", criterion_norm),
]


def run_suite(window=2, cap=20000, jobs=1, only=None):
    """Run the battery; criterion 10 (determinism) is a property of this report itself."""
    ctx = _Context(window, cap, jobs)
    criteria, timings, budgets = [], {}, {}
    for cid, title, fn in CRITERIA:
        if only is not None and cid not in only:
            continue
        t = time.perf_counter()
        ok, details, sub = fn(ctx)
        elapsed = time.perf_counter() - t
        criteria.append({"id": cid, "title": title, "passed": bool(ok), "details": details})
        timings[str(cid)] = {"total": round(elapsed, 3), **{k: round(v, 3) for k, v in sub.items()}}
        if cid in TIME_BUDGETS:
            budgets[str(cid)] = all(v < TIME_BUDGETS[cid] for v in sub.values())
    return {
        "command": "suite",
        "config": {"window": window, "poset_cap": cap},
        "criteria": criteria,
        "overall": all(c["passed"] for c in criteria),
        "metadata": {
            "version": __version__,
            "python": platform.python_version(),
            "jobs": jobs,
            "timings_seconds": timings,
            "within_time_budgets": budgets,
        },
    }
