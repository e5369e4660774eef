"""Exit criteria of the package, one test per criterion.

Each test records a PASS/FAIL line shown in the pytest terminal summary.
"""

import time
from itertools import combinations

import numpy as np
import pytest

from almostcommute.cli import main
from almostcommute.family import analytic_delta_sequence, approximate_family, closed_form_delta_bound
from almostcommute.generate import derive_seed, generate_family
from almostcommute.io import read_sweep_csv
from almostcommute.linalg import commutator, op_norm
from almostcommute.pair import approximate_pair
from almostcommute.partition import PartitionParams, build_partition
from oracles import check_partition_properties, oracle_partition

pytestmark = pytest.mark.acceptance

SQRT3 = 3**0.5
PAIR_NS = (4, 8, 16, 32, 64, 128)
PAIR_TRIALS = 200
SEED = 2718


def _pair_epsilon(n, rng):
    # log-uniform noise; measured delta lands between ~1e-6 and ~2e-2
    return 10 ** rng.uniform(-5.0, -1.5)


@pytest.fixture(scope="module")
def pair_trials():
    rng = np.random.default_rng(SEED)
    trials = []
    start = time.perf_counter()
    for t in range(PAIR_TRIALS):
        n = PAIR_NS[t % len(PAIR_NS)]
        H1, H2 = generate_family(n, 2, _pair_epsilon(n, rng), derive_seed(SEED, t))
        trials.append((n, H1, H2, approximate_pair(H1, H2)))
    return trials, time.perf_counter() - start


def test_c1_pair_bounds(pair_trials, criterion):
    trials, elapsed = pair_trials
    bad = []
    for n, _, _, r in trials:
        slack = 1e-9 * n
        in_range = 1e-6 < r.delta <= 1 / 16
        ok = (
            in_range
            and r.guaranteed
            and r.err1 <= 2 * r.delta**0.25 + slack
            and r.err2 <= SQRT3 * r.delta**0.25 + slack
        )
        if not ok:
            bad.append((n, r.delta, r.err1, r.err2))
    deltas = [r.delta for *_, r in trials]
    worst1 = max(r.err1 / r.delta**0.25 for *_, r in trials)
    worst2 = max(r.err2 / r.delta**0.25 for *_, r in trials)
    criterion(
        "C1 pair bounds",
        not bad and elapsed < 30,
        f"{len(trials)} trials, delta in [{min(deltas):.2e}, {max(deltas):.2e}], "
        f"max err1/delta^1/4={worst1:.3f} (<=2), max err2/delta^1/4={worst2:.3f} (<=1.732), "
        f"{elapsed:.1f}s, violations={bad[:3]}",
    )


def test_c2_exact_commutation(pair_trials, criterion):
    trials, _ = pair_trials
    bad = 0
    for _, _, _, r in trials:
        c12 = commutator(r.A1, r.A2)
        cdiag = commutator(np.diag(r.eigenvalues), r.A1)
        bad += bool(np.any(c12 != 0) or np.any(cdiag != 0))
    criterion("C2 exact commutation", bad == 0, f"{len(trials)} trials, nonzero commutators in {bad}")


def test_c3_norm_caps(pair_trials, criterion):
    trials, _ = pair_trials
    worst1 = worst2 = -np.inf
    for _, _, H2, r in trials:
        worst1 = max(worst1, op_norm(r.A1) - 1.0)
        worst2 = max(worst2, op_norm(r.A2) - op_norm(H2))
    criterion(
        "C3 norm caps",
        worst1 <= 1e-10 and worst2 <= 1e-10,
        f"max(||A1||-1)={worst1:.2e}, max(||A2||-||H2||)={worst2:.2e}",
    )


def test_c4_partition_oracle(criterion):
    rng = np.random.default_rng(SEED + 4)
    failures = []
    start = time.perf_counter()
    for trial in range(1000):
        n = int(rng.integers(1, 65))
        k = int(rng.integers(1, 11))
        m = int(rng.integers(1, 11))
        values = np.sort(rng.uniform(-1.0, 1.0, n))
        if trial % 10 == 0:
            # hit bucket boundaries and the endpoints exactly
            grid = rng.integers(-k * m, k * m + 1, n) / (k * m)
            values = np.sort(grid)
        part = build_partition(values, PartitionParams(k, m))
        problems = check_partition_properties(values, k, m, part.exceptional, part.labels)
        r0, sizes, _ = oracle_partition(values, k, m)
        if sizes[part.residue] != min(sizes):
            problems.append(f"residue {part.residue} not minimal: {sizes}")
        if part.residue != r0:
            problems.append(f"residue {part.residue} != oracle {r0}")
        if problems:
            failures.append((trial, problems))
    elapsed = time.perf_counter() - start
    criterion(
        "C4 partition oracle",
        not failures and elapsed < 5,
        f"1000 instances, {len(failures)} failures {failures[:2]}, {elapsed:.2f}s",
    )


def test_c5_family_commutation(criterion):
    start = time.perf_counter()
    runs = 0
    failures = []
    for p in (3, 4):
        for n in (8, 16, 32):
            for e, eps in enumerate((1e-6, 1e-4, 1e-2)):
                for trial in range(50):
                    H = generate_family(n, p, eps, derive_seed(SEED + 5, p, n, e, trial))
                    r = approximate_family(H)
                    runs += 1
                    commute = all(not np.any(commutator(a, b)) for a, b in combinations(r.A, 2))
                    ledger = all(
                        err <= bound + 1e-9 * n for err, bound in zip(r.errs, r.ledger_bounds)
                    )
                    if not (commute and ledger):
                        failures.append((p, n, eps, trial, commute, ledger))
    elapsed = time.perf_counter() - start
    criterion(
        "C5 family commutation",
        not failures and elapsed < 60,
        f"{runs} runs, {len(failures)} failures {failures[:2]}, {elapsed:.1f}s",
    )


def test_c6_guaranteed_family(criterion):
    lines = []
    ok = True
    for seed in range(5):
        H = generate_family(16, 3, 1e-10, derive_seed(SEED + 6, seed))
        r = approximate_family(H)
        delta = r.delta_input
        bound = 5 * delta ** (1 / 16)
        seq = analytic_delta_sequence(delta, 3)
        ok &= (
            delta <= 16.0**-8
            and r.guaranteed
            and all(err <= bound for err in r.errs)
            and seq[1] <= 1 / 16
            and seq[0] <= seq[1]
            and all(d <= closed_form_delta_bound(delta, i) for i, d in enumerate(seq, 1))
        )
        lines.append(f"delta={delta:.2e} max_err={max(r.errs):.2e} bound={bound:.3f} delta2={seq[1]:.4f}")
    criterion("C6 guaranteed family", ok, "; ".join(lines))


def _run_sweep(path, timing=True):
    args = ["sweep", "--n", "16", "--n", "64", "--p", "2", "--trials", "5", "--seed", str(SEED),
            "--output", str(path)]
    for eps in ("1e-6", "1e-5", "1e-4", "1e-3", "1e-2"):
        args += ["--epsilon", eps]
    if not timing:
        args.append("--no-timing")
    return main(args)


def test_c7_scaling_chart(tmp_path, criterion):
    path = tmp_path / "sweep.csv"
    code = _run_sweep(path)
    rows = read_sweep_csv(path)
    delta = np.array([float(r["delta"]) for r in rows])
    err1 = np.array([float(r["err1"]) for r in rows])
    err2 = np.array([float(r["err2"]) for r in rows])
    ratio1 = np.max(err1 / delta**0.25)
    ratio2 = np.max(err2 / delta**0.25)
    decades = np.log10(delta.max() / delta.min())
    # comparison column against the earlier 12 delta^(1/6) constant
    prior = 12 * delta ** (1 / 6)
    improved = np.all(2 * delta**0.25 <= prior)
    criterion(
        "C7 scaling chart",
        code == 0 and decades >= 4 and ratio1 <= 2.01 and ratio2 <= SQRT3 + 0.01 and improved,
        f"{len(rows)} rows over {decades:.2f} decades of delta, max err1/delta^1/4={ratio1:.3f}, "
        f"max err2/delta^1/4={ratio2:.4f}, min(12 delta^1/6 / 2 delta^1/4)="
        f"{np.min(prior / (2 * delta**0.25)):.2f}",
    )


def test_c8_determinism(tmp_path, criterion):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run_sweep(a, timing=False) == 0
    assert _run_sweep(b, timing=False) == 0
    same_csv = a.read_bytes() == b.read_bytes()

    fam = tmp_path / "fam.json"
    assert main(["generate", "--n", "16", "--p", "3", "--epsilon", "1e-4", "--seed", str(SEED),
                 "--output", str(fam)]) == 0
    outputs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        assert main(["family", "--input", str(fam), "--output", str(out)]) == 0
        outputs.append(out.read_bytes())
    same_report = outputs[0] == outputs[1]
    criterion(
        "C8 determinism",
        same_csv and same_report,
        f"sweep csv identical={same_csv}, family report identical={same_report}",
    )
