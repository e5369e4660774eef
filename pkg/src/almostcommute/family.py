"""Exactly commuting approximants for three or more almost commuting Hermitian matrices.

The pair construction is applied repeatedly. Round ``t`` diagonalizes the
current ``t``-th operator inside every block of the current block structure,
replaces it by its cluster-center quantization and truncates all later
operators to the new clusters. The block structure is then refined by
intersecting it with those clusters. Rotations are block diagonal, so operators
finalized in earlier rounds are scalar on each block and stay untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DomainError, GuaranteeDomainError, PreconditionError, StructureError
from .linalg import (
    DEFAULT_TOLERANCES,
    Tolerances,
    as_hermitian,
    commutator,
    conjugate,
    eigh,
    hermitize,
    hs_norm,
)
from .pair import (
    DEFAULT_DELTA_FLOOR,
    DELTA_MAX,
    _check_norms,
    approximate_pair,
    build_A1,
    choose_params,
    truncate_to_blocks,
)
from .partition import EXCEPTIONAL, build_partition


@dataclass(frozen=True)
class BlockPartitionState:
    """Common invariant-subspace decomposition carried between rounds.

    ``blocks`` are sorted index arrays partitioning ``range(n)``; ``frozen``
    marks exceptional indices of earlier rounds, which are permanent singletons.
    """

    basis: np.ndarray
    blocks: tuple[np.ndarray, ...]
    frozen: np.ndarray

    @classmethod
    def initial(cls, n: int) -> "BlockPartitionState":
        return cls(
            basis=np.eye(n, dtype=np.complex128),
            blocks=(np.arange(n),),
            frozen=np.zeros(n, dtype=bool),
        )

    @property
    def n(self) -> int:
        return self.frozen.size

    def block_ids(self) -> np.ndarray:
        ids = np.empty(self.n, dtype=np.int64)
        for b, idx in enumerate(self.blocks):
            ids[idx] = b
        return ids


def check_family_condition(delta: float, p: int) -> bool:
    """True iff ``delta <= 16 ** (-2 * 4 ** (p - 2))``.

    The threshold is the power of two ``2 ** (-8 * 4 ** (p - 2))``, so the test
    is done exactly on the binary exponent and never underflows.
    """
    if p < 3:
        raise DomainError(f"family condition needs p >= 3, got {p} (use the pair path)")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    exponent = 8 * 4 ** (p - 2)
    mant, e = math.frexp(delta)  # delta = mant * 2**e, 0.5 <= mant < 1
    return e <= -exponent or (e == 1 - exponent and mant == 0.5)


def analytic_delta_sequence(delta: float, p: int) -> list[float]:
    """Worst-case commutator norms ``delta_1 = delta``, ``delta_{i+1} = 8 delta_i^(1/4)``.

    Returns ``p - 1`` values, one per round.
    """
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    seq = [float(delta)]
    for _ in range(p - 2):
        seq.append(8.0 * seq[-1] ** 0.25)
    return seq


def closed_form_delta_bound(delta: float, i: int) -> float:
    """``16 * delta^(1/4^(i-1))``, an upper bound for the ``i``-th analytic value."""
    return 16.0 * math.exp(math.log(delta) / 4 ** (i - 1))


def family_gamma(delta: float, p: int) -> float:
    """``delta^(1/4^(p-1))``."""
    return math.exp(math.log(delta) / 4 ** (p - 1))


def blockwise_eigh(h, state: BlockPartitionState, tol: Tolerances = DEFAULT_TOLERANCES):
    """Diagonalize a block-diagonal Hermitian matrix without mixing blocks.

    Returns ``(values, rotation)``: ``values[i]`` is the eigenvalue attached to
    index ``i`` (sorted within each block only) and ``rotation`` is a unitary,
    block diagonal with respect to ``state.blocks``, whose columns are the
    eigenvectors. Singleton blocks get rotation exactly 1 and keep their
    diagonal entry as eigenvalue.
    """
    h = np.asarray(h)
    n = state.n
    if h.shape != (n, n):
        raise StructureError(f"matrix {h.shape} does not match state of size {n}")
    ids = state.block_ids()
    cross = ids[:, None] != ids[None, :]
    limit = tol.herm(n)
    leak = float(np.max(np.abs(h[cross]), initial=0.0))
    if leak > limit:
        raise StructureError(f"entry of size {leak:.3e} couples two different blocks")
    frozen_mass = float(np.max(np.abs(h[state.frozen]), initial=0.0))
    if frozen_mass > limit:
        raise StructureError(f"frozen row carries entry of size {frozen_mass:.3e}")

    values = np.empty(n, dtype=np.float64)
    rotation = np.zeros((n, n), dtype=np.complex128)
    for idx in state.blocks:
        if idx.size == 1:
            i = idx[0]
            values[i] = h[i, i].real
            rotation[i, i] = 1.0
            continue
        w, v = eigh(h[np.ix_(idx, idx)])
        values[idx] = w
        rotation[np.ix_(idx, idx)] = v
    return values, rotation


def rotate_blockwise(h, blocks, rotation) -> np.ndarray:
    """``U^* H U`` for block-diagonal ``U``, computed block by block.

    Entries outside the blocks come out as exact zeros.
    """
    out = np.zeros_like(h, dtype=np.complex128)
    for idx in blocks:
        sub = np.ix_(idx, idx)
        if idx.size == 1:
            out[sub] = h[sub]
            continue
        u = rotation[sub]
        out[sub] = u.conj().T @ h[sub] @ u
    return hermitize(out)


def refine_blocks(state: BlockPartitionState, labels) -> BlockPartitionState:
    """Intersect every block with the label classes.

    Exceptional indices become frozen singletons; frozen indices stay frozen.
    """
    labels = np.asarray(labels)
    frozen = state.frozen | (labels == EXCEPTIONAL)
    new_blocks = []
    for idx in state.blocks:
        if idx.size == 1:
            new_blocks.append(idx)
            continue
        keep = idx[~frozen[idx]]
        for i in idx[frozen[idx]]:
            new_blocks.append(np.array([i]))
        for a in np.unique(labels[keep]):
            new_blocks.append(keep[labels[keep] == a])
    new_blocks.sort(key=lambda b: int(b[0]))
    return BlockPartitionState(basis=state.basis, blocks=tuple(new_blocks), frozen=frozen)


@dataclass(frozen=True)
class MultiResult:
    """Output of :func:`approximate_family`.

    All ``A`` are given in ``basis``. ``delta_measured[t]`` is the largest
    commutator norm between the operator quantized in round ``t`` and the
    later ones; ``delta_used[t]`` is the value the round's parameters were
    chosen from. ``ledger_bounds[i]`` sums the per-round error allowances of
    every round that changed operator ``i``.
    """

    A: list[np.ndarray]
    basis: np.ndarray
    delta_input: float
    delta_measured: list[float]
    delta_used: list[float]
    delta_analytic: list[float]
    errs: list[float]
    bounds: list[float]
    ledger_bounds: list[float]
    step_bounds: list[float]
    corrections: np.ndarray
    gamma: float
    guaranteed: bool
    analytic: bool
    forced: bool
    delta_floor: float
    state: BlockPartitionState | None = None
    rotations: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def p(self) -> int:
        return len(self.A)

    def in_original_basis(self) -> list[np.ndarray]:
        q = self.basis
        qh = q.conj().T
        return [hermitize(q @ a @ qh) for a in self.A]


def max_pairwise_commutator(hs) -> float:
    return max((hs_norm(commutator(a, b)) for a, b in combinations(hs, 2)), default=0.0)


def _from_pair(H, result, analytic: bool) -> MultiResult:
    step = 2.0 * result.delta_used**0.25
    return MultiResult(
        A=[result.A1, result.A2],
        basis=result.basis,
        delta_input=max_pairwise_commutator(H),
        delta_measured=[result.delta],
        delta_used=[result.delta_used],
        delta_analytic=[result.delta_used],
        errs=[result.err1, result.err2],
        bounds=[result.bound1, result.bound2],
        ledger_bounds=[step, step],
        step_bounds=[step],
        corrections=np.array([[result.err1, result.err2]]),
        gamma=result.delta_used**0.25,
        guaranteed=result.guaranteed,
        analytic=analytic,
        forced=result.forced,
        delta_floor=result.delta_floor,
        rotations=[result.basis],
    )


def approximate_family(
    H,
    *,
    force: bool = False,
    analytic: bool = False,
    delta_floor: float = DEFAULT_DELTA_FLOOR,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> MultiResult:
    """Pairwise exactly commuting approximants of a list of Hermitian matrices.

    In the default measured mode each round picks its parameters from the
    commutator norms actually observed; ``analytic=True`` follows the
    worst-case recursion ``delta -> 8 delta^(1/4)`` instead. A round whose
    parameter ``delta`` exceeds 1/16 aborts unless ``force`` is set.

    ``guaranteed`` reports whether the input satisfies the family smallness
    condition (and the norm caps); the returned ``bounds`` are only claimed
    in that case. The per-round ledger ``ledger_bounds`` applies regardless.
    """
    H = [as_hermitian(h, tol) for h in H]
    p = len(H)
    if p < 2:
        raise DomainError(f"need at least two operators, got {p}")
    if len({h.shape for h in H}) != 1:
        raise PreconditionError("operators differ in shape")
    if p == 2:
        pair = approximate_pair(H[0], H[1], force=force, delta_floor=delta_floor, tol=tol)
        return _from_pair(H, pair, analytic)

    norms_ok = _check_norms(H, tol, force)
    n = H[0].shape[0]
    delta_input = max_pairwise_commutator(H)
    delta_eff = max(delta_input, delta_floor)
    guaranteed = bool(norms_ok and check_family_condition(delta_eff, p))
    gamma = family_gamma(delta_eff, p)
    delta_analytic = analytic_delta_sequence(delta_eff, p)

    current = [hermitize(h) for h in H]
    finals: list[np.ndarray | None] = [None] * p
    state = BlockPartitionState.initial(n)
    corrections = np.zeros((p - 1, p))
    measured, used, step_bounds, rotations = [], [], [], []

    for t in range(p - 1):
        values, rotation = blockwise_eigh(current[t], state, tol)
        rotations.append(rotation)
        for j in range(t + 1, p):
            current[j] = rotate_blockwise(current[j], state.blocks, rotation)
        state = BlockPartitionState(
            basis=state.basis @ rotation, blocks=state.blocks, frozen=state.frozen
        )
        diag = np.diag(values).astype(np.complex128)

        delta_t = max(hs_norm(commutator(diag, current[j])) for j in range(t + 1, p))
        delta_param = delta_analytic[t] if analytic else max(delta_t, delta_floor)
        if delta_param > DELTA_MAX and not force:
            raise GuaranteeDomainError(
                f"round {t + 1}: commutator norm {delta_param:.6g} exceeds 1/16 (use force)"
            )
        params = choose_params(min(delta_param, DELTA_MAX))
        partition = build_partition(np.clip(values, -1.0, 1.0), params, require_sorted=False)

        finals[t] = build_A1(values, partition)
        corrections[t, t] = hs_norm(finals[t] - diag)
        for j in range(t + 1, p):
            truncated = truncate_to_blocks(current[j], partition)
            corrections[t, j] = hs_norm(truncated - current[j])
            current[j] = truncated
        state = refine_blocks(state, partition.labels)

        measured.append(delta_t)
        used.append(delta_param)
        step_bounds.append(2.0 * max(delta_t, delta_param) ** 0.25)

    finals[p - 1] = current[p - 1]
    basis = state.basis
    errs = [hs_norm(a - conjugate(h, basis)) for a, h in zip(finals, H)]
    ledger = [sum(step_bounds[: min(i, p - 2) + 1]) for i in range(p)]

    return MultiResult(
        A=finals,
        basis=basis,
        delta_input=delta_input,
        delta_measured=measured,
        delta_used=used,
        delta_analytic=delta_analytic,
        errs=errs,
        bounds=[5.0 * gamma] * p,
        ledger_bounds=ledger,
        step_bounds=step_bounds,
        corrections=corrections,
        gamma=gamma,
        guaranteed=guaranteed,
        analytic=analytic,
        forced=force,
        delta_floor=delta_floor,
        state=state,
        rotations=rotations,
    )
