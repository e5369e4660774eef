"""Dense Hermitian matrix helpers: norms, commutators and eigendecomposition.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Functions
never modify their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericError, PreconditionError


@dataclass(frozen=True)
class Tolerances:
    """Round-off tolerances. Those ending in ``_per_n`` are multiplied by n."""

    herm_per_n: float = 1e-12
    eig: float = 1e-10
    unit_per_n: float = 1e-10
    diag_per_n: float = 1e-10

    def herm(self, n: int) -> float:
        return self.herm_per_n * n

    def unit(self, n: int) -> float:
        return self.unit_per_n * n

    def diag(self, n: int) -> float:
        return self.diag_per_n * n


DEFAULT_TOLERANCES = Tolerances()


def _square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise DimensionError(f"{name} must have dimension >= 1")
    return a


def hs_norm(a) -> float:
    """Normalized Hilbert-Schmidt norm ``sqrt(sum |a_ij|^2 / n)``."""
    a = _square(a)
    return float(np.sqrt(np.sum(np.abs(a) ** 2) / a.shape[0]))


def op_norm(h) -> float:
    """Operator norm of a Hermitian matrix, i.e. the largest ``|eigenvalue|``."""
    h = _square(h)
    try:
        values = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigvalsh failed for n={h.shape[0]}: {exc}") from exc
    return float(np.max(np.abs(values)))


def commutator(a, b) -> np.ndarray:
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"commutator of {a.shape} and {b.shape}")
    return a @ b - b @ a


def hermitize(a) -> np.ndarray:
    """Return ``(A + A^*) / 2`` as complex128.

    The result is exactly Hermitian in floating point: entries (i, j) and
    (j, i) are conjugates bit for bit and the diagonal is real.
    """
    a = _square(a).astype(np.complex128, copy=False)
    return (a + a.conj().T) / 2


def hermiticity_defect(a) -> float:
    a = _square(a)
    return float(np.max(np.abs(a - a.conj().T)))


def as_hermitian(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validate ``a`` as Hermitian within ``tol.herm(n)`` and return a complex copy."""
    a = _square(a).astype(np.complex128)
    defect = hermiticity_defect(a)
    if defect > tol.herm(a.shape[0]):
        raise PreconditionError(
            f"matrix is not Hermitian: max |a_ij - conj(a_ji)| = {defect:.3e}"
        )
    return a


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, basis)`` with ``values`` ascending and the columns of
    ``basis`` orthonormal eigenvectors, so ``basis^* h basis`` is diagonal.
    """
    h = _square(h)
    try:
        values, basis = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigh did not converge for n={h.shape[0]}: {exc}") from exc
    return values, basis.astype(np.complex128, copy=False)


def conjugate(h, q) -> np.ndarray:
    """Change of basis ``Q^* H Q``."""
    h = _square(h, "h")
    q = _square(q, "basis")
    if h.shape != q.shape:
        raise DimensionError(f"cannot conjugate {h.shape} by basis {q.shape}")
    return q.conj().T @ h @ q


def unitarity_defect(q) -> float:
    q = _square(q)
    return float(np.max(np.abs(q.conj().T @ q - np.eye(q.shape[0]))))
