"""State and report files.

A state file is JSON::

    {
      "family": "boson",
      "dims": [2],
      "matrix": [
        [[0.70710678118654757, 0], [0, 0]],
        [[0, 0], [0, 0]]
      ]
    }

``dims`` is ``[N]`` for identical particles and ``[N, M]`` for
distinguishable ones; ``matrix`` is row-major with every complex entry a
``[re, im]`` pair.  Files written here are in canonical form: fixed key
order, one matrix row per line, floats with 17 significant digits.  Reading
and rewriting a canonical file reproduces it byte for byte.

Report files use the same conventions.  Reduced densities are stored with
``rho[nu][mu] = <a_mu^+ a_nu> / <N>``.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from . import __version__
from .measures import CorrelationReport
from .states import Family, State, make_state

TOOL = "pairschmidt"
_STATE_KEYS = ("family", "dims", "matrix")


class StateFileError(ValueError):
    """Malformed state file; the message names the line or field."""


def format_number(x) -> str:
    x = float(x) + 0.0  # folds -0.0 into 0.0
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _emit(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_emit(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if _depth(obj) <= 2:
            return "[" + ", ".join(_emit(v, indent) for v in obj) + "]"
        rows = [pad + "  " + _emit(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _depth(obj) -> int:
    if isinstance(obj, (list, tuple)):
        return 1 + max((_depth(v) for v in obj), default=0)
    if isinstance(obj, dict):
        return 99
    return 0


def dumps(obj) -> str:
    return _emit(obj) + "\n"


def matrix_to_pairs(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def dump_state(state: State) -> str:
    return dumps(
        {
            "family": state.family.value,
            "dims": list(state.dims),
            "matrix": matrix_to_pairs(state.matrix),
        }
    )


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_state_document(text: str) -> tuple[Family, np.ndarray]:
    """Validate the file structure and return ``(family, matrix)``.

    No physics is checked here; symmetry and normalization are up to the
    caller.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise StateFileError("line 1: top level must be an object")
    for key in _STATE_KEYS:
        if key not in doc:
            raise StateFileError(f"field '{key}': missing")
    extra = sorted(set(doc) - set(_STATE_KEYS))
    if extra:
        raise StateFileError(f"field '{extra[0]}': unknown field")

    try:
        family = Family(doc["family"])
    except ValueError:
        raise StateFileError(
            f"field 'family': expected one of {[f.value for f in Family]}, got {doc['family']!r}"
        ) from None

    dims = doc["dims"]
    want = 2 if family is Family.DISTINGUISHABLE else 1
    if (
        not isinstance(dims, list)
        or len(dims) != want
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)
    ):
        raise StateFileError(f"field 'dims': expected {want} positive integer(s), got {dims!r}")
    rows, cols = (dims[0], dims[1]) if want == 2 else (dims[0], dims[0])

    mat = doc["matrix"]
    if not isinstance(mat, list) or len(mat) != rows:
        raise StateFileError(f"field 'matrix': expected {rows} rows")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(mat):
        if not isinstance(row, list) or len(row) != cols:
            raise StateFileError(f"field 'matrix[{i}]': expected {cols} entries")
        for j, pair in enumerate(row):
            if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(x) for x in pair)):
                raise StateFileError(f"field 'matrix[{i}][{j}]': expected a [re, im] pair of numbers")
            re, im = float(pair[0]), float(pair[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise StateFileError(f"field 'matrix[{i}][{j}]': non-finite value")
            out[i, j] = complex(re, im)
    return family, out


def load_state(text: str) -> State:
    """Parse and ingest a state file (symmetry projection included)."""
    family, matrix = parse_state_document(text)
    return make_state(family, matrix)


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def report_document(
    report: CorrelationReport,
    *,
    input_sha256: str,
    renormalized: bool = False,
    bits: bool = False,
    emit_basis: bool = False,
) -> dict:
    scale = 1 / math.log(2) if bits else 1.0
    dec = report.decomposition
    doc = {
        "tool": TOOL,
        "version": __version__,
        "input_sha256": input_sha256,
        "renormalized": renormalized,
        "family": report.family.value,
        "dims": list(report.dims),
        "rank": report.rank,
        "correlated": report.correlated,
        "entropy_units": "bits" if bits else "nats",
        "entropy": report.entropy * scale,
        "entropy_floor": report.entropy_floor * scale,
        "entropy_ceiling": report.entropy_ceiling * scale,
        "grobe_k": report.grobe_k,
        "k_density": report.k_density,
        "det_measure": report.det_measure,
        "coefficients": [float(c) for c in dec.coefficients],
    }
    if emit_basis:
        basis = {"u": matrix_to_pairs(dec.u)}
        if dec.v is not None:
            basis["v"] = matrix_to_pairs(dec.v)
        doc["basis"] = basis
    return doc
