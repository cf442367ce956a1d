"""Command line entry point ``sapc``.

Exit codes: 0 when every verdict holds, 1 when a verdict fails (the report is
still written), 2 on input errors.  Reports are JSON with sorted keys; the
only run-dependent content sits under ``metadata``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, corpus
from .errors import (
    InconsistentOrientation,
    NonManifoldLink,
    NotClosedUnderFaces,
    SapcError,
    SchemaError,
    UnknownSimplex,
)
from .localsheaf import descent_check, excision_square_check, guide_object
from .simplicial import OrientedManifoldComplex, SimplicialMap, load_complex, load_simplicial, open_star_family, star_family
from .suite import random_covers, run_suite
from .symmetric import (
    is_nondegenerate,
    product_sapc,
    relative_certificate,
    sap_pair_from_manifold_with_boundary,
    sapc_from_manifold,
    signature_report,
)

INPUT_ERRORS = (SchemaError, InconsistentOrientation, NonManifoldLink, NotClosedUnderFaces, UnknownSimplex)


class InputError(Exception):
    pass


def _positive(name):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1")
        return value

    return parse


def build_parser():
    p = argparse.ArgumentParser(prog="sapc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sapc {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--family",
        default="stars",
        help="stars, stars-and-edges, or a custom seed list as JSON (e.g. '[[[0]], [[1],[2]]]') or @file.json",
    )
    common.add_argument("--window", type=_positive("window"), default=2)
    common.add_argument("--poset-cap", dest="poset_cap", type=_positive("poset cap"), default=20000)
    common.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    common.add_argument("--jobs", type=_positive("jobs"), default=1)
    sub = p.add_subparsers(dest="command", required=True)
    for name, nargs, text in (
        ("signature", 1, "signature and nondegeneracy of a triangulated manifold (or pair)"),
        ("duality", 1, "local slant-duality certificate over an open family"),
        ("excision", 1, "Mayer–Vietoris / pushout checks for a two-set cover"),
        ("descent", 1, "descent and codescent checks on random covers"),
        ("product", 2, "product of two symmetric complexes"),
    ):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("inputs", nargs=nargs, help="triangulation JSON files (corpus names also accepted)")
    sp = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    sp.add_argument("inputs", nargs="*", help=argparse.SUPPRESS)
    return p


# -- input handling --------------------------------------------------------------


def _read_document(spec):
    path = Path(spec)
    if not path.exists():
        candidate = corpus.path(spec)
        if candidate.exists():
            path = candidate
        else:
            raise InputError(f"{spec}: no such file (also looked in {corpus.corpus_dir()})")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON ({err.msg} at line {err.lineno})") from None


def _load_manifold(spec) -> OrientedManifoldComplex:
    return load_complex(_read_document(spec))


def _family(X, spec, cap):
    if spec in ("stars", "stars-and-edges"):
        return star_family(X, spec, cap)
    text = spec
    if spec.startswith("@"):
        text = Path(spec[1:]).read_text(encoding="utf-8")
    try:
        seeds = json.loads(text)
    except json.JSONDecodeError:
        raise InputError(f"--family: expected stars, stars-and-edges or a JSON seed list, got {spec!r}") from None
    if not isinstance(seeds, list) or not seeds:
        raise InputError("--family: a custom seed list must be a nonempty JSON array")
    parsed = []
    for i, seed in enumerate(seeds):
        if not isinstance(seed, list) or not seed:
            raise SchemaError(f"/family/{i}", "seed must be a simplex or a list of simplices")
        if all(isinstance(v, int) for v in seed):
            parsed.append(tuple(sorted(seed)))
        else:
            parsed.append([tuple(sorted(s)) for s in seed])
    return open_star_family(X, parsed, cap, "custom")


# -- commands ---------------------------------------------------------------------


def _certificate_dict(cert):
    return None if cert is None else cert.as_dict()


def cmd_signature(args):
    M = _load_manifold(args.inputs[0])
    if M.is_closed:
        fam = _family(M.base, args.family, args.poset_cap)
        sc = sapc_from_manifold(M, fam, window=args.window, certify=False, cap=args.poset_cap)
        ok, cert = is_nondegenerate(sc, cap=args.poset_cap, jobs=args.jobs, spot_checks=8)
        rep = signature_report(sc)
    else:
        pair = sap_pair_from_manifold_with_boundary(M, window=args.window, certify=False, cap=args.poset_cap)
        cert = relative_certificate(pair)
        ok = cert.overall
        rep = signature_report(pair)
    report = {
        "name": M.name,
        "dimension": M.n,
        "nondegenerate": ok,
        "signature": rep.signature,
        "form": rep.as_dict(),
        "certificate": _certificate_dict(cert),
    }
    summary = f"{M.name}: dimension {M.n}, signature {rep.signature}" + (" (flagged: dimension not 4k)" if rep.flagged else "")
    summary += f", nondegenerate {ok} [{cert.coverage}, {len(cert.entries)} opens]"
    return ok, report, summary


def cmd_duality(args):
    M = _load_manifold(args.inputs[0])
    fam = _family(M.base, args.family, args.poset_cap)
    if not M.is_closed:
        raise InputError("duality needs a closed manifold; use `signature` for pairs")
    sc = sapc_from_manifold(M, fam, window=args.window, certify=False, cap=args.poset_cap)
    ok, cert = is_nondegenerate(sc, cap=args.poset_cap, jobs=args.jobs, spot_checks=8)
    report = {"name": M.name, "dimension": M.n, "family": fam.name, "certificate": cert.as_dict(), "overall": ok}
    summary = f"{M.name}: {cert.coverage} coverage, {len(cert.entries)} opens, all isomorphisms: {ok}"
    if cert.lattice_size is not None:
        summary += f" (lattice size {cert.lattice_size})"
    return ok, report, summary


def _split(X, fam):
    if fam.name == "custom" and len(fam.seed_opens) == 2:
        return fam.seed_opens
    verts = [v for (v,) in X.simplices(0)]
    half = (len(verts) + 1) // 2
    a, b = verts[: half + 1], verts[half:]
    return fam.up_closure([(v,) for v in a]), fam.up_closure([(v,) for v in b])


def cmd_excision(args):
    X = load_simplicial(_read_document(args.inputs[0]))
    fam = _family(X, args.family, args.poset_cap)
    G = guide_object(SimplicialMap.identity(X), fam)
    U, V = _split(X, fam)
    r = excision_square_check(G, U, V)
    report = {
        "name": _read_document(args.inputs[0])["name"],
        "U": fam.label(U),
        "V": fam.label(V),
        **{k: r[k] for k in ("mayer_vietoris_exact", "pushout", "relative_quasi_iso", "overall")},
        "exact": {str(k): v for k, v in r["exact"].items()},
    }
    summary = (
        f"excision on {report['name']}: Mayer–Vietoris {r['mayer_vietoris_exact']}, "
        f"pushout {r['pushout']}, relative quotient {r['relative_quasi_iso']}"
    )
    return r["overall"], report, summary


def cmd_descent(args):
    doc = _read_document(args.inputs[0])
    X = load_simplicial(doc)
    fam = _family(X, args.family, args.poset_cap)
    G = guide_object(SimplicialMap.identity(X), fam)
    rows = []
    for mode, W in random_covers(fam, 20, seed=0):
        r = descent_check(G, W, mode)
        rows.append({"mode": mode, "opens": r["opens"], "target": r["target"], "overall": r["overall"]})
    ok = all(r["overall"] for r in rows)
    report = {"name": doc["name"], "covers": rows, "overall": ok}
    passed = sum(r["overall"] for r in rows)
    return ok, report, f"descent/codescent on {doc['name']}: {passed}/{len(rows)} covers pass"


def _symmetric_of(M, args):
    if M.is_closed:
        return sapc_from_manifold(M, window=args.window, certify=True, cap=args.poset_cap, jobs=args.jobs, spot_checks=8)
    return sap_pair_from_manifold_with_boundary(M, window=args.window, certify=True, cap=args.poset_cap)


def cmd_product(args):
    A, B = (_load_manifold(x) for x in args.inputs)
    a, b = _symmetric_of(A, args), _symmetric_of(B, args)
    prod = product_sapc(a, b)
    rep = signature_report(prod)
    name = f"{A.name}x{B.name}"
    if hasattr(prod, "psi"):
        cert = relative_certificate(prod)
        ok = cert.overall and prod.boundary_defects() == []
        certificate = cert.as_dict()
        boundary = signature_report(prod.boundary()).as_dict()
    else:
        if prod.is_factored:
            ok = True
            certificate = {"coverage": "factors", "factors": [_certificate_dict(a.certificate), _certificate_dict(b.certificate)]}
        else:
            ok, cert = is_nondegenerate(prod, cap=args.poset_cap, jobs=args.jobs)
            certificate = cert.as_dict()
        boundary = None
    report = {
        "name": name,
        "dimension": A.n + B.n,
        "nondegenerate": ok,
        "signature": rep.signature,
        "form": rep.as_dict(),
        "materialized": not getattr(prod, "is_factored", False),
        "certificate": certificate,
    }
    if boundary is not None:
        report["boundary_form"] = boundary
    summary = f"{name}: dimension {A.n + B.n}, signature {rep.signature}"
    if not rep.flagged and rep.hyperbolic:
        summary += f", middle form hyperbolic of rank {rep.rank}"
    summary += f", nondegenerate {ok}"
    return ok, report, summary


def cmd_suite(args):
    report = run_suite(window=args.window, cap=args.poset_cap, jobs=args.jobs)
    lines = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']:>2} {c['title']}" for c in report["criteria"]]
    return report["overall"], report, "\n".join(lines)


COMMANDS = {
    "signature": cmd_signature,
    "duality": cmd_duality,
    "excision": cmd_excision,
    "descent": cmd_descent,
    "product": cmd_product,
    "suite": cmd_suite,
}


def run(argv=None):
    """Parse, run, write the report; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        ok, report, summary = COMMANDS[args.command](args)
    except SchemaError as err:
        print(f"sapc: schema error at {err.pointer or '/'}: {err.message}", file=sys.stderr)
        return 2
    except (InputError, *INPUT_ERRORS) as err:
        print(f"sapc: input error: {err.args[0] if err.args else err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"sapc: input error: {err}", file=sys.stderr)
        return 2
    except SapcError as err:
        print(f"sapc: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    report.setdefault("metadata", {})
    report["metadata"].update({"version": __version__, "elapsed_seconds": round(time.time() - started, 3)})
    report["command"] = args.command
    report["config"] = {
        "family": args.family,
        "inputs": [os.path.basename(x) for x in args.inputs],
        "poset_cap": args.poset_cap,
        "window": args.window,
    }
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return 0 if ok else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
