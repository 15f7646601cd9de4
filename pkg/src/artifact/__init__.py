"""Finite, truncated models of simplicial sets, simplicial groups, W̄G and WG,
twisted Cartesian products, their classification, and finite C_k gerbes.

Everything is computed exactly on integer index tables; see the README for
the command-line interface and the acceptance suite.
"""

from . import bundles, classify, decalage, homology, sgroup, sset
from ._kernels import backend
from .bundles import (
    Torsor,
    TwistFn,
    UniversalBundle,
    extract_twisting,
    find_torsor_isomorphism,
    h1_enumerate,
    twisted_product,
    validate_torsor,
    validate_twisting,
    wbar,
    wg,
)
from .classify import GerbeData, cech_nerve, classifying_map, verify_classification
from .homology import cohomology_coeffs, homology_groups, normalized_chains, smith_normal_form
from .sgroup import SimpGroup, constant_group, nerve_cyclic_group
from .sset import SMap, TruncSSet, ValidationReport, validate_sset

__version__ = "0.1.0"
