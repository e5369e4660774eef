"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 file or usage error,
3 precondition error. The summary goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import AlmostCommuteError
from .family import approximate_family
from .generate import generate_family
from .io import MatrixFileError, read_matrix_file, write_matrix_file, write_sweep_csv
from .pair import DEFAULT_DELTA_FLOOR, approximate_pair
from .sweep import SweepConfig, run_sweep
from .verify import verify_family, verify_pair

EXIT_OK, EXIT_VERIFY, EXIT_FILE, EXIT_PRECONDITION = 0, 1, 2, 3

log = logging.getLogger("almostcommute")


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _summary(delta, errs, bounds, guaranteed) -> str:
    parts = [f"delta={_fmt(delta)}"]
    for i, (e, b) in enumerate(zip(errs, bounds), 1):
        parts += [f"err{i}={_fmt(e)}", f"bound{i}={_fmt(b)}"]
    parts.append(f"guaranteed={str(bool(guaranteed)).lower()}")
    return " ".join(parts)


def _load(path, minimum: int):
    matrices = read_matrix_file(path)
    if len(matrices) < minimum:
        raise MatrixFileError(f"{path} holds {len(matrices)} matrices, need at least {minimum}")
    return list(matrices.values())


def _finish(report, summary, output, matrices, basis, frame) -> int:
    sys.stderr.write(report.to_text())
    if output:
        write_matrix_file(
            output,
            matrices,
            extra={
                "basis_frame": frame,
                "basis": basis,
                "summary": summary,
                "report": report.to_dict(),
            },
        )
    print(summary)
    return EXIT_OK if report.overall else EXIT_VERIFY


def cmd_pair(args) -> int:
    H1, H2 = _load(args.input, 2)[:2]
    result = approximate_pair(H1, H2, force=args.force, delta_floor=args.delta_floor)
    report = verify_pair(H1, H2, result)
    if args.basis == "original":
        A1, A2 = result.in_original_basis()
    else:
        A1, A2 = result.A1, result.A2
    summary = _summary(
        result.delta,
        (result.err1, result.err2),
        (result.bound1, result.bound2),
        result.guaranteed,
    )
    return _finish(report, summary, args.output, {"A1": A1, "A2": A2}, result.basis, args.basis)


def cmd_family(args) -> int:
    H = _load(args.input, 2)
    if len(H) == 2:
        return cmd_pair(args)
    result = approximate_family(
        H, force=args.force, analytic=args.analytic, delta_floor=args.delta_floor
    )
    report = verify_family(H, result)
    A = result.in_original_basis() if args.basis == "original" else result.A
    bounds = result.bounds if result.guaranteed else result.ledger_bounds
    summary = _summary(result.delta_input, result.errs, bounds, result.guaranteed)
    matrices = {f"A{i}": a for i, a in enumerate(A, 1)}
    return _finish(report, summary, args.output, matrices, result.basis, args.basis)


def cmd_generate(args) -> int:
    family = generate_family(args.n, args.p, args.epsilon, args.seed)
    matrices = {f"H{i}": h for i, h in enumerate(family, 1)}
    write_matrix_file(args.output, matrices, extra={"epsilon": args.epsilon, "seed": args.seed})
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = SweepConfig(
        ns=tuple(args.n),
        epsilons=tuple(args.epsilon),
        p=args.p,
        trials=args.trials,
        seed=args.seed,
        force=args.force,
        analytic=args.analytic,
        delta_floor=args.delta_floor,
        timing=not args.no_timing,
    )
    rows, ok = run_sweep(config)
    write_sweep_csv(args.output, config.p, rows)
    print(f"rows={len(rows)} failed={sum(r['guaranteed'] == 'failed' for r in rows)} output={args.output}")
    return EXIT_OK if ok else EXIT_VERIFY


def _approx_flags(sub):
    sub.add_argument("--force", action="store_true", help="run outside the proved regime")
    sub.add_argument("--delta-floor", type=float, default=DEFAULT_DELTA_FLOOR)
    sub.add_argument("--analytic", action="store_true", help="use the worst-case delta recursion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almostcommute",
        description="Commuting approximants of almost commuting Hermitian matrices.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    for name, func in (("pair", cmd_pair), ("family", cmd_family)):
        sub = subs.add_parser(name, help=f"approximate a {name} of matrices from a file")
        sub.add_argument("--input", required=True)
        sub.add_argument("--output")
        sub.add_argument("--basis", choices=("rotated", "original"), default="rotated")
        _approx_flags(sub)
        sub.set_defaults(func=func)

    sub = subs.add_parser("generate", help="write a random almost commuting family")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", type=int, default=2)
    sub.add_argument("--epsilon", type=float, default=0.0)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", required=True)
    sub.set_defaults(func=cmd_generate)

    sub = subs.add_parser("sweep", help="seeded experiment grid written as CSV")
    sub.add_argument("--n", type=int, action="append", required=True)
    sub.add_argument("--epsilon", type=float, action="append", required=True)
    sub.add_argument("--p", type=int, default=2)
    sub.add_argument("--trials", type=int, default=1)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", required=True)
    sub.add_argument("--no-timing", action="store_true", help="write wall_time_ms as 0")
    _approx_flags(sub)
    sub.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (MatrixFileError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_FILE
    except AlmostCommuteError as exc:
        log.error("%s", exc)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
