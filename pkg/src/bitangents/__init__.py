"""Exact bitangent arithmetic for plane quartics over cyclotomic fields.

Height-pairing sign matrices of bitangent sections, connected numbers of
bitangent triples and the subarrangement invariant, with a floating-point
oracle for cross-checks.
"""

from .curve import BitangentLine, BitangentSection, QuarticCurve, derive_section, verify_bitangent
from .dataset import Dataset, builtin_klein, load_dataset, save_dataset
from .exactfield import CyclotomicField, FieldElement, Poly, field_make, sqrt_in_field
from .pairing import PairingTable, SignMatrix, gram_matrix, height_pairing
from .topology import (
    classify_subsets,
    connected_number_det,
    connected_number_liftgraph,
    connected_number_triple,
    parity_identity_check,
    subarrangement_invariant,
)

__version__ = "0.1.0"
