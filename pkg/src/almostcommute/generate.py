"""Seeded random test instances: commuting families plus Hermitian noise."""

from __future__ import annotations

import numpy as np

from .linalg import hermitize, op_norm

# stream tags for per-matrix seeds
_UNITARY, _SPECTRUM, _NOISE = 0, 1, 2


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *tags])


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian Hermitian matrix scaled to operator norm 1."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = hermitize(z)
    return h / op_norm(h)


def generate_family(n: int, p: int, epsilon: float, seed: int) -> list[np.ndarray]:
    """``p`` Hermitian ``n x n`` matrices with ``||H_i|| <= 1`` that almost commute.

    A shared Haar unitary diagonalizes ``p`` random spectra drawn uniformly from
    [-1, 1]; each member then receives ``epsilon`` times an independent Hermitian
    noise matrix of operator norm 1 and is rescaled back into the unit ball if
    needed. Output is a deterministic function of the arguments.
    """
    if n < 1 or p < 1 or epsilon < 0:
        raise ValueError(f"invalid arguments n={n}, p={p}, epsilon={epsilon}")
    q = haar_unitary(n, _rng(seed, _UNITARY))
    family = []
    for i in range(p):
        spectrum = _rng(seed, _SPECTRUM, i).uniform(-1.0, 1.0, n)
        h = hermitize((q * spectrum) @ q.conj().T)
        if epsilon > 0:
            h = hermitize(h + epsilon * random_hermitian(n, _rng(seed, _NOISE, i)))
        norm = op_norm(h)
        if norm > 1.0:
            h = h / norm
        family.append(h)
    return family


def derive_seed(seed: int, *tags: int) -> int:
    """Child seed for one trial of an experiment grid."""
    return int(np.random.SeedSequence([int(seed), *tags]).generate_state(1, dtype=np.uint32)[0])
