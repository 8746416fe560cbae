"""Coherence engine over pluggable cell suppliers."""

from .core import (
    CoherenceResult,
    IsoCertificate,
    IsoRefutation,
    certify_object_isomorphism,
    verify_associator_naturality,
    verify_pentagon,
    verify_triangle,
    verify_unitor_naturality,
)
from .instances import RingsBicategory, WStarBicategory, sample_wstar_chain

__all__ = [
    "CoherenceResult",
    "IsoCertificate",
    "IsoRefutation",
    "RingsBicategory",
    "WStarBicategory",
    "certify_object_isomorphism",
    "sample_wstar_chain",
    "verify_associator_naturality",
    "verify_pentagon",
    "verify_triangle",
    "verify_unitor_naturality",
]
