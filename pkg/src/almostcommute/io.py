"""Matrix files and sweep CSV output.

A matrix file is a JSON document::

    {"n": 2,
     "matrices": [{"name": "H1", "entries": [[[re, im], [re, im]], ...]}, ...]}

Numbers are written with 17 significant digits so that doubles survive a
write/read cycle bit for bit (including the sign of zero). Extra top-level
keys are allowed and ignored by :func:`read_matrix_file`.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import AlmostCommuteError
from .linalg import DEFAULT_TOLERANCES, Tolerances, hermiticity_defect


class MatrixFileError(AlmostCommuteError):
    """Unreadable or malformed matrix file."""


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise MatrixFileError(f"cannot serialize non-finite value {x!r}")
    return f"{x:.17g}"


def _matrix_text(a: np.ndarray, indent: str) -> str:
    rows = []
    for row in np.asarray(a, dtype=np.complex128):
        rows.append("[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row) + "]")
    return "[\n" + ",\n".join(indent + "  " + r for r in rows) + "\n" + indent + "]"


def dumps_matrix_file(matrices: dict[str, np.ndarray], extra: dict | None = None) -> str:
    """Serialize named square matrices (and optional JSON-able extras)."""
    if not matrices:
        raise MatrixFileError("no matrices to write")
    shapes = {np.shape(a) for a in matrices.values()}
    if len(shapes) != 1:
        raise MatrixFileError(f"matrices differ in shape: {sorted(shapes)}")
    n = next(iter(shapes))[0]
    items = []
    for name, a in matrices.items():
        items.append(
            f'    {{"name": {json.dumps(name)}, "entries": {_matrix_text(a, "    ")}}}'
        )
    parts = [f'  "n": {n}', '  "matrices": [\n' + ",\n".join(items) + "\n  ]"]
    for key, value in (extra or {}).items():
        if isinstance(value, np.ndarray):
            text = _matrix_text(value, "  ")
        else:
            text = json.dumps(value, sort_keys=True)
        parts.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_matrix_file(path, matrices: dict[str, np.ndarray], extra: dict | None = None) -> None:
    Path(path).write_text(dumps_matrix_file(matrices, extra))


def parse_matrix(entries, n: int, name: str) -> np.ndarray:
    try:
        arr = np.array(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(f"matrix {name!r}: entries are not numeric pairs") from exc
    if arr.shape != (n, n, 2):
        raise MatrixFileError(f"matrix {name!r}: expected shape ({n}, {n}, 2), got {arr.shape}")
    out = np.empty((n, n), dtype=np.complex128)
    # component-wise assignment keeps the sign of zero
    out.real = arr[..., 0]
    out.imag = arr[..., 1]
    return out


def loads_matrix_file(
    text: str, tol: Tolerances = DEFAULT_TOLERANCES
) -> dict[str, np.ndarray]:
    """Parse a matrix file, validating shape and Hermiticity of every matrix."""
    try:
        doc = json.loads(text, parse_int=float)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "matrices" not in doc:
        raise MatrixFileError("document must be an object with 'n' and 'matrices'")
    n = doc["n"]
    if n != int(n) or n < 1:
        raise MatrixFileError(f"invalid dimension n={n!r}")
    n = int(n)
    out: dict[str, np.ndarray] = {}
    for i, item in enumerate(doc["matrices"]):
        if not isinstance(item, dict) or "entries" not in item:
            raise MatrixFileError(f"matrix #{i} lacks 'entries'")
        name = str(item.get("name", f"H{i + 1}"))
        if name in out:
            raise MatrixFileError(f"duplicate matrix name {name!r}")
        a = parse_matrix(item["entries"], n, name)
        defect = hermiticity_defect(a)
        if defect > tol.herm(n):
            raise MatrixFileError(f"matrix {name!r} is not Hermitian (defect {defect:.3e})")
        out[name] = a
    if not out:
        raise MatrixFileError("file contains no matrices")
    return out


def read_matrix_file(path, tol: Tolerances = DEFAULT_TOLERANCES) -> dict[str, np.ndarray]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    return loads_matrix_file(text, tol)


def sweep_header(p: int) -> list[str]:
    return (
        ["trial", "n", "epsilon", "p", "delta"]
        + [f"err{i}" for i in range(1, p + 1)]
        + [f"bound{i}" for i in range(1, p + 1)]
        + ["guaranteed", "wall_time_ms"]
    )


def write_sweep_csv(path, p: int, rows) -> None:
    """Write sweep rows (dicts keyed by :func:`sweep_header` names)."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=sweep_header(p), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_value(v) for k, v in row.items()})


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def read_sweep_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
