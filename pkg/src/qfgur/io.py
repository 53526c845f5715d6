"""JSON readers and writers for measurements, measurement sets and states.

Complex numbers are ``[re, im]`` pairs (bare reals are accepted too), matrices
are row-major nested lists. Every reader error is raised as
:class:`~qfgur.errors.ParseError` carrying ``file:line`` of the offending
object where it can be located.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .core import (
    POVM,
    PROJECTIVE,
    DensityState,
    Measurement,
    MeasurementSet,
    make_povm,
    make_projective_measurement,
)
from .errors import ParseError, QfgurError

DECIMALS = 12


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, max(pos, 0)) + 1


def _key_lines(text: str, keys: tuple[str, ...]) -> list[int]:
    pattern = re.compile(r'"(%s)"\s*:' % "|".join(map(re.escape, keys)))
    return [_line_of(text, m.start()) for m in pattern.finditer(text)]


def _complex(v, where):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
    ):
        return complex(v[0], v[1])
    raise ParseError(f"{where}: expected a number or [re, im], got {v!r}")


def _vector(rows, where) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{where}: expected a non-empty list")
    return np.array([_complex(v, where) for v in rows])


def _matrix(rows, where) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a nested list matrix")
    m = np.array([[_complex(v, where) for v in r] for r in rows])
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError(f"{where}: matrix must be square")
    return m


def _load(path) -> tuple[object, str, str]:
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text), text, path
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc


def measurement_from_obj(obj, where: str = "<measurement>") -> Measurement:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: measurement must be an object")
    label = str(obj.get("label", ""))
    kind = obj.get("kind", PROJECTIVE if "vectors" in obj else POVM)
    try:
        if kind == PROJECTIVE:
            if "vectors" not in obj:
                raise ParseError(f"{where}: projective measurement needs 'vectors'")
            vecs = obj["vectors"]
            if not isinstance(vecs, list):
                raise ParseError(f"{where}: 'vectors' must be a list")
            return make_projective_measurement([_vector(v, where) for v in vecs], label)
        if kind == POVM:
            if "elements" not in obj:
                raise ParseError(f"{where}: POVM needs 'elements'")
            elems = obj["elements"]
            if not isinstance(elems, list):
                raise ParseError(f"{where}: 'elements' must be a list")
            return make_povm([_matrix(e, where) for e in elems], label)
    except ParseError:
        raise
    except (QfgurError, ValueError) as exc:
        raise ParseError(f"{where}: {type(exc).__name__}: {exc}") from exc
    raise ParseError(f"{where}: unknown measurement kind {kind!r}")


def measurement_set_from_obj(obj, where: str = "<set>", lines: list[int] | None = None) -> MeasurementSet:
    if not isinstance(obj, dict) or not isinstance(obj.get("measurements"), list):
        raise ParseError(f"{where}: expected an object with a 'measurements' list")
    ms = []
    for i, m in enumerate(obj["measurements"]):
        loc = f"{where}:{lines[i]}" if lines and i < len(lines) else where
        ms.append(measurement_from_obj(m, f"{loc}: measurements[{i}]"))
    if not ms:
        raise ParseError(f"{where}: empty measurement list")
    dim = obj.get("dim")
    if dim is not None and dim != ms[0].dim:
        raise ParseError(f"{where}: declared dim {dim} but measurements act on dim {ms[0].dim}")
    try:
        return MeasurementSet(tuple(ms), obj.get("weights"), label=str(obj.get("label", "")))
    except QfgurError as exc:
        raise ParseError(f"{where}: {type(exc).__name__}: {exc}") from exc


def read_measurement_set(path) -> MeasurementSet:
    obj, text, path = _load(path)
    lines = _key_lines(text, ("vectors", "elements"))
    mset = measurement_set_from_obj(obj, path, lines)
    if not mset.label:
        mset = MeasurementSet(mset.measurements, mset.weights, label=Path(path).stem)
    return mset


def state_from_obj(obj, where: str = "<state>") -> DensityState:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError(f"{where}: expected an object with 'matrix'")
    m = _matrix(obj["matrix"], where)
    dim = obj.get("dim")
    if dim is not None and dim != m.shape[0]:
        raise ParseError(f"{where}: declared dim {dim} but matrix is {m.shape[0]}x{m.shape[0]}")
    split = obj.get("split")
    try:
        return DensityState(m, label=str(obj.get("label", "")), split=tuple(split) if split else None)
    except QfgurError as exc:
        raise ParseError(f"{where}: {type(exc).__name__}: {exc}") from exc


def read_state(path) -> DensityState:
    obj, text, path = _load(path)
    lines = _key_lines(text, ("matrix",))
    return state_from_obj(obj, f"{path}:{lines[0]}" if lines else path)


def read_json(path):
    return _load(path)[0]


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------


def _encode_complex(z: complex):
    return [float(z.real), float(z.imag)] if z.imag else float(z.real)


def measurement_to_obj(m: Measurement) -> dict:
    if m.is_projective:
        return {
            "label": m.label,
            "kind": PROJECTIVE,
            "vectors": [[_encode_complex(z) for z in v] for v in m.vectors],
        }
    return {
        "label": m.label,
        "kind": POVM,
        "elements": [[[_encode_complex(z) for z in row] for row in e] for e in m.elements],
    }


def measurement_set_to_obj(mset: MeasurementSet) -> dict:
    return {
        "label": mset.label,
        "dim": mset.dim,
        "weights": [float(w) for w in mset.weights],
        "measurements": [measurement_to_obj(m) for m in mset],
    }


def state_to_obj(state: DensityState) -> dict:
    out = {"label": state.label, "dim": state.dim}
    if state.split is not None:
        out["split"] = list(state.split)
    out["matrix"] = [[_encode_complex(z) for z in row] for row in state.matrix]
    return out


def rounded(obj, decimals: int = DECIMALS):
    """Recursively convert numpy scalars/arrays to plain JSON values, rounding floats."""
    if isinstance(obj, dict):
        return {str(k): rounded(v, decimals) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v, decimals) for v in obj]
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist(), decimals)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        x = round(x, decimals)
        return 0.0 if x == 0 else x
    if isinstance(obj, complex):
        return [rounded(obj.real, decimals), rounded(obj.imag, decimals)]
    return obj


def format_number(x, decimals: int = DECIMALS) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    value = round(float(x), decimals)
    return f"{0.0 if value == 0 else value:.{decimals}f}"
