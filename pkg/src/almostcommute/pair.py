"""Exactly commuting approximants for a pair of almost commuting Hermitian matrices.

Given ``H1, H2`` with ``||H_j|| <= 1`` and ``delta = ||[H1, H2]||_tr <= 1/16``,
:func:`approximate_pair` returns Hermitian ``A1, A2`` with ``[A1, A2] = 0``,
``||H1 - A1||_tr <= 2 delta^(1/4)`` and ``||H2 - A2||_tr <= sqrt(3) delta^(1/4)``.

The construction works in the eigenbasis of ``H1``. ``A1`` replaces every
eigenvalue belonging to a cluster by the cluster center; ``A2`` keeps only the
entries of ``H2`` that connect two indices of the same cluster. Both outputs
are returned in that eigenbasis, where their commutator is exactly zero in
floating point: ``A1`` is diagonal and takes one value on each block of ``A2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, GuaranteeDomainError, PreconditionError
from .linalg import (
    DEFAULT_TOLERANCES,
    Tolerances,
    as_hermitian,
    commutator,
    conjugate,
    eigh,
    hermitize,
    hs_norm,
    op_norm,
)
from .partition import PartitionParams, SpectralPartition, build_partition, group_centers

#: largest commutator norm for which the error bounds are proved
DELTA_MAX = 1.0 / 16.0
DEFAULT_DELTA_FLOOR = 1e-14
SQRT3 = math.sqrt(3.0)


def choose_params(delta: float, *, force: bool = False) -> PartitionParams:
    """Bucket parameters ``k = floor(2/sqrt(delta))``, ``m_res = floor(1/(2 delta^(1/4)))``.

    With ``force`` a ``delta`` above 1/16 is clamped to 1/16 instead of raising.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if delta > DELTA_MAX:
        if not force:
            raise GuaranteeDomainError(
                f"commutator norm {delta:.6g} exceeds 1/16; bounds do not apply (use force)"
            )
        delta = DELTA_MAX
    k = math.floor(2.0 / math.sqrt(delta))
    m_res = math.floor(1.0 / (2.0 * delta**0.25))
    return PartitionParams(k=k, m_res=m_res)


def build_A1(spectrum, partition: SpectralPartition) -> np.ndarray:
    """Diagonal matrix of group centers, with exceptional eigenvalues kept as they are."""
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if spectrum.shape != (partition.n,):
        raise DimensionError(
            f"spectrum of length {spectrum.size} does not match partition of size {partition.n}"
        )
    mu = np.where(partition.exceptional, spectrum, group_centers(partition))
    return np.diag(mu).astype(np.complex128)


def block_mask(partition: SpectralPartition) -> np.ndarray:
    """Boolean mask of entries (i, j) with i and j in the same group."""
    labels = partition.labels
    return (labels[:, None] == labels[None, :]) & ~partition.exceptional[:, None]


def truncate_to_blocks(h, partition: SpectralPartition) -> np.ndarray:
    """Zero every entry not joining two indices of the same group.

    Rows and columns of exceptional indices become identically zero.
    """
    h = np.asarray(h)
    if h.shape != (partition.n, partition.n):
        raise DimensionError(f"matrix {h.shape} does not match partition of size {partition.n}")
    return np.where(block_mask(partition), h, 0).astype(np.complex128)


@dataclass(frozen=True)
class PairResult:
    """Output of :func:`approximate_pair`.

    ``A1`` and ``A2`` are expressed in ``basis`` (eigenvectors of ``H1`` as
    columns); use :meth:`in_original_basis` to map them back.
    """

    A1: np.ndarray
    A2: np.ndarray
    basis: np.ndarray
    eigenvalues: np.ndarray
    H2_rotated: np.ndarray
    partition: SpectralPartition
    delta: float
    delta_used: float
    err1: float
    err2: float
    bound1: float
    bound2: float
    guaranteed: bool
    forced: bool
    delta_floor: float

    @property
    def params(self) -> PartitionParams:
        return self.partition.params

    def in_original_basis(self) -> tuple[np.ndarray, np.ndarray]:
        """``(Q A1 Q^*, Q A2 Q^*)``.

        Commutation then holds only up to round-off of order ``n * eps``.
        """
        q = self.basis
        qh = q.conj().T
        return hermitize(q @ self.A1 @ qh), hermitize(q @ self.A2 @ qh)


def _check_norms(hs, tol: Tolerances, force: bool) -> bool:
    norms = [op_norm(h) for h in hs]
    ok = all(v <= 1.0 + tol.eig for v in norms)
    if not ok and not force:
        worst = max(norms)
        raise PreconditionError(f"operator norm {worst:.6g} exceeds 1 (use force)")
    return ok


def approximate_pair(
    H1,
    H2,
    *,
    force: bool = False,
    delta_floor: float = DEFAULT_DELTA_FLOOR,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PairResult:
    """Build commuting Hermitian approximants of ``(H1, H2)``.

    Raises :class:`PreconditionError` when an operator norm exceeds 1 and
    :class:`GuaranteeDomainError` when the commutator norm exceeds 1/16, unless
    ``force`` is set. A forced run still produces commuting outputs but is
    flagged ``guaranteed=False``.

    Commutator norms below ``delta_floor`` (including exactly commuting input)
    are replaced by ``delta_floor`` when choosing parameters and bounds.
    """
    H1 = as_hermitian(H1, tol)
    H2 = as_hermitian(H2, tol)
    if H1.shape != H2.shape:
        raise DimensionError(f"H1 {H1.shape} and H2 {H2.shape} differ in shape")
    norms_ok = _check_norms((H1, H2), tol, force)

    eigenvalues, basis = eigh(H1)
    h2 = hermitize(conjugate(H2, basis))
    delta = hs_norm(commutator(np.diag(eigenvalues), h2))
    delta_used = max(delta, delta_floor)
    in_domain = delta_used <= DELTA_MAX
    params = choose_params(delta_used, force=force)

    partition = build_partition(np.clip(eigenvalues, -1.0, 1.0), params)
    A1 = build_A1(eigenvalues, partition)
    A2 = truncate_to_blocks(h2, partition)

    root = delta_used**0.25
    return PairResult(
        A1=A1,
        A2=A2,
        basis=basis,
        eigenvalues=eigenvalues,
        H2_rotated=h2,
        partition=partition,
        delta=delta,
        delta_used=delta_used,
        err1=hs_norm(A1 - np.diag(eigenvalues)),
        err2=hs_norm(A2 - h2),
        bound1=2.0 * root,
        bound2=SQRT3 * root,
        guaranteed=bool(in_domain and norms_ok),
        forced=force,
        delta_floor=delta_floor,
    )
