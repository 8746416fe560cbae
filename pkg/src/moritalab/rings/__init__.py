"""Finite rings, bimodules, tensor products, and Morita certification."""

from .base import (
    FiniteRing,
    cyclic_ring,
    direct_product_ring,
    matrix_ring,
    opposite_ring,
    truncated_polynomial_ring,
)
from .bimodules import (
    Bimodule,
    BimoduleMap,
    bimodule_direct_sum,
    column_module,
    identity_map,
    invert_bimodule_map,
    maps_equal,
    regular_bimodule,
    right_module,
    row_module,
    scalar_bimodule,
    zero_bimodule,
)
from .tensor import (
    TensorProduct,
    factor_through_tensor,
    left_unitor,
    right_unitor,
    tensor_associator,
    tensor_of_maps,
    tensor_product,
)
from .hom import (
    EndomorphismRing,
    HomGroup,
    bimodule_isomorphic,
    end_ring,
    endomorphism_ring,
    hom_group,
)
from .morita import (
    MoritaCertificate,
    MoritaContext,
    PropertyCertificate,
    canonical_end_map,
    certify_invertible_bimodule,
    is_fg_projective,
    is_generator,
    is_progenerator,
    morita_context,
)
from .isosearch import is_ring_isomorphism, ring_iso_search
from .families import (
    CoherencePool,
    all_subgroups,
    augmentation_scalar,
    cyclic_right_modules,
    quotient_right_module,
    right_ideals,
    right_module_family,
    tensor_oracle_corpus,
)

__all__ = [
    "FiniteRing",
    "cyclic_ring",
    "direct_product_ring",
    "matrix_ring",
    "opposite_ring",
    "truncated_polynomial_ring",
    "Bimodule",
    "BimoduleMap",
    "bimodule_direct_sum",
    "column_module",
    "identity_map",
    "invert_bimodule_map",
    "maps_equal",
    "regular_bimodule",
    "right_module",
    "row_module",
    "scalar_bimodule",
    "zero_bimodule",
    "TensorProduct",
    "factor_through_tensor",
    "left_unitor",
    "right_unitor",
    "tensor_associator",
    "tensor_of_maps",
    "tensor_product",
    "EndomorphismRing",
    "HomGroup",
    "bimodule_isomorphic",
    "end_ring",
    "endomorphism_ring",
    "hom_group",
    "MoritaCertificate",
    "MoritaContext",
    "PropertyCertificate",
    "canonical_end_map",
    "certify_invertible_bimodule",
    "is_fg_projective",
    "is_generator",
    "is_progenerator",
    "morita_context",
    "is_ring_isomorphism",
    "ring_iso_search",
    "CoherencePool",
    "all_subgroups",
    "augmentation_scalar",
    "cyclic_right_modules",
    "quotient_right_module",
    "right_ideals",
    "right_module_family",
    "tensor_oracle_corpus",
]
