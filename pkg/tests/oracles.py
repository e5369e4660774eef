"""Brute-force reference computations, independent of the package internals."""

from bisect import bisect_left
from fractions import Fraction

import numpy as np


def oracle_buckets(values, k, m):
    """Bucket of each value found by binary search over exact rational boundaries."""
    km = k * m
    bounds = [Fraction(j, km) for j in range(-km, km + 1)]
    out = []
    for v in values:
        pos = bisect_left(bounds, Fraction(float(v)))
        # v in (bounds[pos-1], bounds[pos]]; -1 itself sits in the first bucket
        out.append(max(pos - 1, 0) - km)
    return out


def oracle_partition(values, k, m):
    """Residue and labels by enumerating every residue class and every group interval.

    Labels are ``None`` for exceptional indices.
    """
    buckets = oracle_buckets(values, k, m)
    sizes = []
    for r in range(k):
        members = {a * k + r for a in range(-m, m)}
        sizes.append(sum(j in members for j in buckets))
    r0 = min(range(k), key=lambda r: (sizes[r], r))
    exceptional = {a * k + r0 for a in range(-m, m)}
    labels = []
    for j in buckets:
        if j in exceptional:
            labels.append(None)
            continue
        hits = [a for a in range(-m, m + 1) if (a - 1) * k + r0 < j < a * k + r0]
        assert len(hits) == 1, (j, hits)
        labels.append(hits[0])
    return r0, sizes, labels


def _exact_compare(d_float, a, b, threshold, op):
    """Evaluate ``op(|a - b|, threshold)`` exactly, trusting floats away from the edge."""
    near = np.abs(d_float - float(threshold)) <= 1e-9 * float(threshold)
    result = op(d_float, float(threshold))
    for i, j in zip(*np.nonzero(near)):
        exact = abs(Fraction(float(a[i])) - Fraction(float(b[j])))
        result[i, j] = op(exact, threshold)
    return result


def check_partition_properties(values, k, m, exceptional, labels):
    """Return a list of violated properties (empty when all three hold exactly).

    ``exceptional`` is a boolean mask and ``labels`` group ids (ignored where
    exceptional).
    """
    values = np.asarray(values, dtype=np.float64)
    exceptional = np.asarray(exceptional, dtype=bool)
    labels = np.asarray(labels)
    n = values.size
    problems = []
    if int(exceptional.sum()) * k > n:
        problems.append(f"#J={int(exceptional.sum())} > n/k={n}/{k}")
    keep = ~exceptional
    v = values[keep]
    lab = labels[keep]
    if v.size:
        d = np.abs(v[:, None] - v[None, :])
        same = lab[:, None] == lab[None, :]
        close = _exact_compare(d, v, v, Fraction(1, m), lambda x, t: x < t)
        if np.any(same & ~close):
            problems.append("spread within a group reaches 1/m")
        apart = _exact_compare(d, v, v, Fraction(1, k * m), lambda x, t: x >= t)
        if np.any(~same & ~apart):
            problems.append("groups closer than 1/(km)")
    return problems
