"""Independent re-check of approximation results against the proved bounds.

The checkers recompute norms, commutators and errors from the raw inputs and
the returned matrices. Exact properties (Hermiticity, block structure,
commutation) are compared against literal zero.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .family import MultiResult, check_family_condition, family_gamma, max_pairwise_commutator
from .linalg import (
    DEFAULT_TOLERANCES,
    Tolerances,
    commutator,
    eigh,
    hermiticity_defect,
    hs_norm,
    op_norm,
    unitarity_defect,
)
from .pair import SQRT3, PairResult, block_mask


@dataclass(frozen=True)
class Check:
    name: str
    claimed: float
    measured: float
    passed: bool
    tolerance: float
    applicable: bool = True

    def line(self) -> str:
        status = "N/A " if not self.applicable else ("PASS" if self.passed else "FAIL")
        return (
            f"{status} {self.name} measured={self.measured:.17g} "
            f"claimed={self.claimed:.17g} tolerance={self.tolerance:.3g}"
        )


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def upper(self, name, measured, claimed, tolerance=0.0):
        """Record ``measured <= claimed + tolerance``."""
        measured, claimed = float(measured), float(claimed)
        passed = measured <= claimed + tolerance
        self.checks.append(Check(name, claimed, measured, bool(passed), float(tolerance)))

    def exact_zero(self, name, matrix):
        """Record that every entry of ``matrix`` is literally zero."""
        measured = float(np.max(np.abs(matrix), initial=0.0))
        self.checks.append(Check(name, 0.0, measured, measured == 0.0, 0.0))

    def skipped(self, name, measured, claimed):
        self.checks.append(Check(name, float(claimed), float(measured), True, 0.0, False))

    def to_text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"overall={'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"overall": self.overall, "checks": [asdict(c) for c in self.checks]}


def _slack(n: int, slack: float | None) -> float:
    return 1e-9 * n if slack is None else slack


def _to_original(q, a):
    return q @ a @ q.conj().T


def verify_pair(
    H1,
    H2,
    result: PairResult,
    *,
    slack: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Re-derive every claim about a :class:`PairResult`."""
    H1 = np.asarray(H1, dtype=np.complex128)
    H2 = np.asarray(H2, dtype=np.complex128)
    n = H1.shape[0]
    slack = _slack(n, slack)
    q, A1, A2 = result.basis, result.A1, result.A2
    report = VerificationReport()

    report.upper("basis_unitary", unitarity_defect(q), 0.0, tol.unit(n))
    report.exact_zero("hermitian_A1", A1 - A1.conj().T)
    report.exact_zero("hermitian_A2", A2 - A2.conj().T)
    report.exact_zero("A1_diagonal", A1 - np.diag(np.diagonal(A1)))
    report.exact_zero("A2_block_structure", np.where(block_mask(result.partition), 0, A2))

    report.upper("norm_A1", op_norm(A1), max(1.0, op_norm(H1)), tol.eig)
    report.upper("norm_A2", op_norm(A2), op_norm(H2), tol.eig)

    report.exact_zero("commutator_A1_A2", commutator(A1, A2))
    eigenvalues, _ = eigh(H1)
    report.exact_zero("commutator_H1_A1", commutator(np.diag(eigenvalues), A1))
    A1_orig = _to_original(q, A1)
    A2_orig = _to_original(q, A2)
    report.upper(
        "commutator_H1_A1_original",
        hs_norm(commutator(H1, A1_orig)),
        0.0,
        tol.unit(n) * n,
    )

    delta = hs_norm(commutator(H1, H2))
    report.upper("delta_consistency", abs(delta - result.delta), 0.0, 1e-10)

    root = max(delta, result.delta_floor) ** 0.25
    err1 = hs_norm(A1_orig - H1)
    err2 = hs_norm(A2_orig - H2)
    if result.guaranteed:
        report.upper("err1_bound", err1, 2.0 * root, slack)
        report.upper("err2_bound", err2, SQRT3 * root, slack)
    else:
        report.skipped("err1_bound", err1, 2.0 * root)
        report.skipped("err2_bound", err2, SQRT3 * root)
    return report


def verify_family(
    H,
    result: MultiResult,
    *,
    slack: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Re-derive every claim about a :class:`MultiResult`."""
    H = [np.asarray(h, dtype=np.complex128) for h in H]
    p = len(H)
    n = H[0].shape[0]
    slack = _slack(n, slack)
    q, A = result.basis, result.A
    report = VerificationReport()

    report.upper("basis_unitary", unitarity_defect(q), 0.0, tol.unit(n))
    for i, a in enumerate(A, 1):
        report.exact_zero(f"hermitian_A{i}", a - a.conj().T)
        report.upper(f"norm_A{i}", op_norm(a), max(1.0, op_norm(H[i - 1])), tol.eig)
    for (i, a), (j, b) in combinations(enumerate(A, 1), 2):
        report.exact_zero(f"commutator_A{i}_A{j}", commutator(a, b))

    delta = max(max_pairwise_commutator(H), result.delta_floor)
    if p == 2:
        root = delta**0.25
        claimed = [2.0 * root, SQRT3 * root]
    else:
        claimed = [5.0 * family_gamma(delta, p)] * p
    guaranteed = result.guaranteed and (p == 2 or check_family_condition(delta, p))

    steps = [
        2.0 * max(d_meas, d_used) ** 0.25
        for d_meas, d_used in zip(result.delta_measured, result.delta_used)
    ]
    for i in range(p):
        err = hs_norm(_to_original(q, A[i]) - H[i])
        name = f"err{i + 1}_bound"
        if guaranteed:
            report.upper(name, err, claimed[i], slack)
        else:
            report.skipped(name, err, claimed[i])
        report.upper(f"err{i + 1}_ledger", err, math.fsum(steps[: min(i, p - 2) + 1]), slack)
    return report
