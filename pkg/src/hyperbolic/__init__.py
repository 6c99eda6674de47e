from src.hyperbolic.boundary import BoundaryAction, boundary_local_action, nucleus_extract
from src.hyperbolic.certificate import certify_full_contracting_rsg, faithfulness_check, require_core
from src.hyperbolic.triples import (
    MappingTriple,
    Signature,
    contracting_threshold,
    mapping_triple,
    norm_s,
    signature,
    signature_equivalent,
)

__all__ = [
    "BoundaryAction",
    "MappingTriple",
    "Signature",
    "boundary_local_action",
    "certify_full_contracting_rsg",
    "contracting_threshold",
    "faithfulness_check",
    "mapping_triple",
    "norm_s",
    "nucleus_extract",
    "require_core",
    "signature",
    "signature_equivalent",
]
