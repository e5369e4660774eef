"""Exactly commuting approximants of almost commuting Hermitian matrices.

Small commutators in the normalized Hilbert-Schmidt norm
``||A||_tr = sqrt(sum |a_ij|^2 / n)`` are turned into exactly commuting
Hermitian matrices with explicit error bounds.
"""

from .errors import (
    AlmostCommuteError,
    DimensionError,
    DomainError,
    GuaranteeDomainError,
    NumericError,
    PreconditionError,
    StructureError,
)
from .family import (
    BlockPartitionState,
    MultiResult,
    analytic_delta_sequence,
    approximate_family,
    blockwise_eigh,
    check_family_condition,
    refine_blocks,
)
from .generate import generate_family
from .linalg import Tolerances, commutator, conjugate, eigh, hermitize, hs_norm, op_norm
from .pair import PairResult, approximate_pair, build_A1, choose_params, truncate_to_blocks
from .partition import (
    EXCEPTIONAL,
    PartitionParams,
    SpectralPartition,
    bucket_index,
    build_partition,
    group_center,
    select_residue,
)
from .verify import VerificationReport, verify_family, verify_pair

__version__ = "0.1.0"
