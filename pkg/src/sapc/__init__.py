"""Desk-scale symmetric algebraic Poincaré complexes over finite simplicial complexes."""

__version__ = "0.1.0"

from .chaincore import ChainComplex, ChainMap, homology, mapping_cone, tensor_complex  # noqa: E402
from .errors import SapcError  # noqa: E402
from .simplicial import (  # noqa: E402
    OpenFamily,
    OrientedManifoldComplex,
    SimplicialComplex,
    SimplicialMap,
    load_complex,
    product_complex,
    star_family,
)
from .symmetric import (  # noqa: E402
    SymmetricComplex,
    SymmetricPair,
    is_nondegenerate,
    product_sapc,
    sap_pair_from_manifold_with_boundary,
    sapc_from_manifold,
    signature,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "OpenFamily",
    "OrientedManifoldComplex",
    "SapcError",
    "SimplicialComplex",
    "SimplicialMap",
    "SymmetricComplex",
    "SymmetricPair",
    "homology",
    "is_nondegenerate",
    "load_complex",
    "mapping_cone",
    "product_complex",
    "product_sapc",
    "sap_pair_from_manifold_with_boundary",
    "sapc_from_manifold",
    "signature",
    "star_family",
    "tensor_complex",
]
