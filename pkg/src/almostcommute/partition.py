"""Grouping of eigenvalues into well-separated clusters plus a small leftover set.

Values in [-1, 1] are dropped into ``2*k*m_res`` buckets of width ``1/(k*m_res)``.
Buckets are split into ``k`` residue classes modulo ``k``; the sparsest class is
declared exceptional, and the runs of ``k - 1`` consecutive buckets between two
exceptional buckets form the groups. Groups therefore have spread below
``1/m_res`` and are separated from each other by at least one full bucket.

Bucket boundaries are the exact rationals ``j/(k*m_res)``. Membership is decided
in integer arithmetic on the exact binary value of each float, so the three
partition properties hold exactly rather than up to rounding.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError

#: label of indices that belong to no group
EXCEPTIONAL = int(np.iinfo(np.int64).min)


@dataclass(frozen=True)
class PartitionParams:
    k: int
    m_res: int

    def __post_init__(self):
        if int(self.k) < 1 or int(self.m_res) < 1:
            raise DomainError(f"k and m_res must be >= 1, got k={self.k}, m_res={self.m_res}")

    @property
    def resolution(self) -> int:
        """Number of buckets per unit length, ``k * m_res``."""
        return self.k * self.m_res


def bucket_index(lam: float, k: int, m_res: int) -> int:
    """Index ``j`` of the bucket ``(j/km, (j+1)/km]`` holding ``lam``.

    The lowest bucket ``j = -km`` is closed on the left so that it also holds -1.
    """
    lam = float(lam)
    if not -1.0 <= lam <= 1.0:
        raise DomainError(f"value {lam!r} outside [-1, 1]")
    km = k * m_res
    num, den = lam.as_integer_ratio()
    # j = ceil(lam * km) - 1, computed exactly
    j = -((-num * km) // den) - 1
    return max(j, -km)


def bucket_indices(values, k: int, m_res: int) -> np.ndarray:
    return np.array([bucket_index(v, k, m_res) for v in values], dtype=np.int64)


def select_residue(bucket_counts: Mapping[int, int], k: int) -> int:
    """Residue class modulo ``k`` holding the fewest values; ties go to the smallest."""
    # only occupied residues are stored: k can be far larger than n
    totals: dict[int, int] = {}
    for j, count in bucket_counts.items():
        if count:
            r = int(j) % k
            totals[r] = totals.get(r, 0) + count
    if len(totals) < k:
        r = 0
        while r in totals:
            r += 1
        return r
    return min(totals, key=lambda r: (totals[r], r))


@dataclass(frozen=True)
class SpectralPartition:
    """Result of :func:`build_partition`.

    ``labels[i]`` is the group id of index ``i`` (between ``-m_res`` and
    ``m_res``) or :data:`EXCEPTIONAL`.
    """

    n: int
    params: PartitionParams
    residue: int
    buckets: np.ndarray
    labels: np.ndarray
    # group id -> (lowest, highest) occupied bucket index
    group_buckets: dict[int, tuple[int, int]] = field(repr=False)

    @property
    def exceptional(self) -> np.ndarray:
        return self.labels == EXCEPTIONAL

    @property
    def exceptional_indices(self) -> np.ndarray:
        return np.flatnonzero(self.exceptional)

    def groups(self) -> dict[int, np.ndarray]:
        """Map group id to the sorted indices carrying it (nonempty groups only)."""
        return {a: np.flatnonzero(self.labels == a) for a in sorted(self.group_buckets)}

    def group_interval(self, a: int) -> tuple[float, float]:
        """Value span ``(lo, hi)`` of the occupied buckets making up group ``a``."""
        try:
            jlo, jhi = self.group_buckets[a]
        except KeyError:
            raise KeyError(f"group {a} is empty") from None
        km = self.params.resolution
        return jlo / km, (jhi + 1) / km


def _group_label(j: int, residue: int, k: int) -> int:
    shifted = j - residue
    if shifted % k == 0:
        return EXCEPTIONAL
    return -((-shifted) // k)  # ceil(shifted / k)


def build_partition(values, params: PartitionParams, *, require_sorted: bool = True) -> SpectralPartition:
    """Partition the indices of ``values`` into an exceptional set and groups.

    Guarantees, exactly:

    * at most ``n/k`` indices are exceptional;
    * two values in the same group differ by less than ``1/m_res``;
    * two values in different groups differ by at least ``1/(k*m_res)``.

    ``require_sorted=False`` accepts values in any order; the construction
    itself never relies on the ordering.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise DomainError("values must be a nonempty 1-d sequence")
    if not (np.all(values >= -1.0) and np.all(values <= 1.0)):
        raise DomainError("values must lie in [-1, 1]")
    if require_sorted and np.any(np.diff(values) < 0):
        raise DomainError("values must be sorted ascending")

    k, m_res = params.k, params.m_res
    buckets = bucket_indices(values, k, m_res)
    counts = Counter(buckets.tolist())
    residue = select_residue(counts, k)

    labels = np.empty(values.size, dtype=np.int64)
    group_buckets: dict[int, tuple[int, int]] = {}
    for i, j in enumerate(buckets.tolist()):
        a = _group_label(j, residue, k)
        labels[i] = a
        if a != EXCEPTIONAL:
            lo, hi = group_buckets.get(a, (j, j))
            group_buckets[a] = (min(lo, j), max(hi, j))
    return SpectralPartition(
        n=values.size,
        params=params,
        residue=residue,
        buckets=buckets,
        labels=labels,
        group_buckets=group_buckets,
    )


def group_center(partition: SpectralPartition, a: int) -> float:
    """Midpoint of the value span of group ``a``.

    Every value in the group lies within ``1/(2*m_res)`` of it.
    """
    try:
        jlo, jhi = partition.group_buckets[a]
    except KeyError:
        raise KeyError(f"group {a} is empty") from None
    # int / int is correctly rounded
    return (jlo + jhi + 1) / (2 * partition.params.resolution)


def group_centers(partition: SpectralPartition) -> np.ndarray:
    """Per-index center of the index's group, NaN for exceptional indices."""
    centers = {a: group_center(partition, a) for a in partition.group_buckets}
    return np.array(
        [centers.get(int(a), math.nan) for a in partition.labels], dtype=np.float64
    )
