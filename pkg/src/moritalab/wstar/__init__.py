"""Finite-dimensional operator algebras: standard forms, correspondences,
fusion over a middle algebra, and Morita certification."""

from .algebras import (
    MultiMatrixAlgebra,
    State,
    random_faithful_state,
    trace_state,
)
from .correspondences import (
    Correspondence,
    Intertwiner,
    block_correspondence,
    conjugate_correspondence,
    corr_from_homomorphism,
    correspondences_close,
    identity_correspondence,
    intertwiner_basis,
    unitary_intertwiner,
    vector_correspondence,
)
from .fusion import (
    FUSION_DIM_CAP,
    FusionResult,
    associator,
    connes_fusion,
    left_unitor,
    r_eta,
    right_unitor,
    twisted_balancing_residual,
)
from .morita import WStarMoritaCertificate, certify_morita_equivalent
from .standard import StandardFormData, gns_standard_form, standard_form_residuals

__all__ = [
    "MultiMatrixAlgebra",
    "State",
    "random_faithful_state",
    "trace_state",
    "Correspondence",
    "Intertwiner",
    "block_correspondence",
    "conjugate_correspondence",
    "corr_from_homomorphism",
    "correspondences_close",
    "identity_correspondence",
    "intertwiner_basis",
    "unitary_intertwiner",
    "vector_correspondence",
    "FUSION_DIM_CAP",
    "FusionResult",
    "associator",
    "connes_fusion",
    "left_unitor",
    "r_eta",
    "right_unitor",
    "twisted_balancing_residual",
    "WStarMoritaCertificate",
    "certify_morita_equivalent",
    "StandardFormData",
    "gns_standard_form",
    "standard_form_residuals",
]
