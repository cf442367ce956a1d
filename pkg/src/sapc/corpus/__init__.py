"""Shipped triangulations.  ``SAPC_CORPUS_DIR`` overrides the directory."""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..simplicial import OrientedManifoldComplex, SimplicialComplex, load_complex, load_simplicial

NAMES = ("s2", "s4", "d4", "t2_7", "rp2_6", "cp2_9", "d2_hemisphere")


def corpus_dir() -> Path:
    env = os.environ.get("SAPC_CORPUS_DIR")
    return Path(env) if env else Path(__file__).resolve().parent


def path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return corpus_dir() / f"{stem}.json"


def document(name: str) -> dict:
    with open(path(name), encoding="utf-8") as fh:
        return json.load(fh)


def load(name: str) -> OrientedManifoldComplex:
    return load_complex(document(name))


def load_unoriented(name: str) -> SimplicialComplex:
    return load_simplicial(document(name))
