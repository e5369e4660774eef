"""Seeded delta sweeps: generate, approximate, verify, tabulate."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .errors import AlmostCommuteError
from .family import approximate_family
from .generate import derive_seed, generate_family
from .pair import DEFAULT_DELTA_FLOOR
from .verify import verify_family

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepConfig:
    ns: tuple[int, ...]
    epsilons: tuple[float, ...]
    p: int = 2
    trials: int = 1
    seed: int = 0
    force: bool = False
    analytic: bool = False
    delta_floor: float = DEFAULT_DELTA_FLOOR
    timing: bool = True


def run_trial(n, epsilon, trial, config: SweepConfig, seed: int) -> tuple[dict, bool]:
    """One sweep row and whether the trial verified."""
    p = config.p
    row = {"trial": trial, "n": n, "epsilon": float(epsilon), "p": p}
    H = generate_family(n, p, epsilon, seed)
    start = time.perf_counter()
    try:
        result = approximate_family(
            H, force=config.force, analytic=config.analytic, delta_floor=config.delta_floor
        )
        report = verify_family(H, result)
    except AlmostCommuteError as exc:
        log.warning("trial n=%d epsilon=%g #%d failed: %s", n, epsilon, trial, exc)
        row["delta"] = float("nan")
        for i in range(1, p + 1):
            row[f"err{i}"] = row[f"bound{i}"] = float("nan")
        row["guaranteed"] = "failed"
        row["wall_time_ms"] = 0.0
        return row, False
    elapsed = (time.perf_counter() - start) * 1e3 if config.timing else 0.0

    bounds = result.bounds if result.guaranteed else result.ledger_bounds
    row["delta"] = result.delta_measured[0] if p == 2 else result.delta_input
    for i in range(p):
        row[f"err{i + 1}"] = float(result.errs[i])
        row[f"bound{i + 1}"] = float(bounds[i])
    if not report.overall:
        log.warning(
            "trial n=%d epsilon=%g #%d failed checks: %s",
            n, epsilon, trial, ", ".join(c.name for c in report.failed()),
        )
    row["guaranteed"] = result.guaranteed if report.overall else "failed"
    row["wall_time_ms"] = round(elapsed, 3)
    return row, report.overall


def run_sweep(config: SweepConfig) -> tuple[list[dict], bool]:
    """All rows ordered by (n, epsilon, trial), plus whether every trial verified."""
    if not config.ns or not config.epsilons or config.trials < 1:
        raise ValueError("sweep grids must be nonempty and trials >= 1")
    rows, ok = [], True
    for a, n in enumerate(config.ns):
        for b, eps in enumerate(config.epsilons):
            for trial in range(config.trials):
                seed = derive_seed(config.seed, a, b, trial)
                row, passed = run_trial(n, eps, trial, config, seed)
                rows.append(row)
                ok &= passed
    return rows, ok
