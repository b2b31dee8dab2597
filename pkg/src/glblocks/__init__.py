"""Depth-zero Bernstein blocks of p-adic groups of GL-type, combinatorially.

Blocks are labelled by inertial parameters: Frobenius-stable multisets of
tame characters.  The package enumerates them, computes centralizers, the
unipotent group G_phi and its Hecke algebra type, groups blocks over Z_ell,
and pushes parameters along a catalogue of L-homomorphisms.
"""
from .errors import BlockError
from .local_fields import FULL_INERTIA, ExtShape, InertiaKind, ResidueDatum, intermediate_field
from .parameters import (
    GLTypeGroup,
    InertialParam,
    centralizer_shape,
    count_blocks,
    enumerate_blocks,
    fuse_blocks,
    hecke_descriptor,
    trivial_parameter,
    unipotent_group,
    validate,
)
from .lhoms import (
    LHom,
    centralizer_condition,
    pushforward,
    reduction_plan,
    strict_unipotent_factorization,
)

__version__ = "0.1.0"

__all__ = [
    "BlockError",
    "FULL_INERTIA",
    "ExtShape",
    "InertiaKind",
    "ResidueDatum",
    "intermediate_field",
    "GLTypeGroup",
    "InertialParam",
    "centralizer_shape",
    "count_blocks",
    "enumerate_blocks",
    "fuse_blocks",
    "hecke_descriptor",
    "trivial_parameter",
    "unipotent_group",
    "validate",
    "LHom",
    "centralizer_condition",
    "pushforward",
    "reduction_plan",
    "strict_unipotent_factorization",
]
