"""Command-line interface.

Verbs: ``bounds``, ``witness``, ``sweep-fig2``, ``werner``, ``zeta`` and
``verify``. Every output embeds a run manifest. Exit codes: 0 ok, 2 input or
parse error, 3 numerical/mathematical error, 4 failed internal assertion,
5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, bounds, kernels, oracle
from .core import werner_state
from .errors import BadParameter, ParseError, QfgurError, RangeError
from .families import builtin_set, fig2_family
from .functionals import (
    werner_setup,
    werner_thresholds,
    witness,
    zeta_fgur,
    zeta_quantum_diagonal,
    zeta_separable,
)
from .io import format_number, read_json, read_measurement_set, read_state, rounded

EXIT_OK, EXIT_PARSE, EXIT_MATH, EXIT_ASSERT, EXIT_VERIFY = 0, 2, 3, 4, 5
ORDER_TOL = 1e-9
THRESHOLD_DIGITS = 7


class AssertionFailure(Exception):
    """An invariant checked while producing output did not hold."""


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def run_manifest(args, inputs) -> dict:
    return {
        "command": args.command,
        "inputs": [str(p) for p in inputs if p],
        "seed": args.seed,
        "tool_version": __version__,
        "backend": kernels.BACKEND,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and not any(isinstance(v, (dict, list)) for v in obj):
        yield prefix, " ".join(format_number(v) for v in obj)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, format_number(obj)


def render_csv(manifest: dict, header, rows) -> str:
    buf = _io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def render_json(manifest: dict, result) -> str:
    return json.dumps({"manifest": manifest, "result": rounded(result)}, indent=2, ensure_ascii=False) + "\n"


def emit(args, manifest, result, table=None, fmt=None) -> None:
    """Write ``result`` as JSON, or ``table = (header, rows)`` (or a key/value dump) as CSV."""
    fmt = fmt or args.format or "json"
    if fmt == "csv":
        header, rows = table if table else (["key", "value"], list(_flatten(rounded(result))))
        text = render_csv(manifest, header, rows)
    else:
        text = render_json(manifest, result)
    write_text(args.out, text)


def write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(_angle(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParseError(f"--{what}: expected comma-separated numbers, got {text!r}") from None


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParseError(f"--{what}: expected comma-separated integers, got {text!r}") from None


def _angle(text: str) -> float:
    """Parse a float, also accepting ``pi``, ``pi/2``, ``3*pi/4``-style values."""
    t = str(text).strip().lower().replace(" ", "")
    if "pi" not in t:
        return float(t)
    num, _, den = t.partition("/")
    coef = num.replace("pi", "").rstrip("*") or "1"
    value = (-1.0 if coef == "-" else float(coef)) * math.pi
    return value / float(den) if den else value


def _builtin(name):
    try:
        return builtin_set(name)
    except BadParameter as exc:
        raise ParseError(f"--builtin: {exc}") from None


def _measurement_set(path, builtin, role):
    if path:
        return read_measurement_set(path)
    if builtin:
        return _builtin(builtin)
    raise ParseError(f"no {role} measurements: give a file or --builtin")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_bounds(args) -> int:
    bob = _measurement_set(args.measurements, args.builtin, "measurement")
    alice = None
    if args.alice:
        alice = read_measurement_set(args.alice)
    elif args.alice_builtin:
        alice = _builtin(args.alice_builtin)
    spectrum = _floats(args.spectrum, "spectrum") if args.spectrum else None
    report = bounds.bound_report(bob, alice, spectrum)
    result = {"measurement_set": bob.label, **report.to_dict()}
    manifest = run_manifest(args, [args.measurements, args.alice])
    w = report.w_vector.components
    rows = [(k, s, w[k - 1]) for k, s in enumerate(report.s_sequence, start=1)]
    emit(args, manifest, result, (["k", "s_k", "w_k"], rows))
    return EXIT_OK


def _witness_inputs(args):
    if args.werner:
        family, _, p = args.werner.partition(":")
        try:
            p = float(p)
        except ValueError:
            raise ParseError(f"--werner expects FAMILY:P, got {args.werner!r}") from None
        state = werner_state(family, p)
        alice_default, bob_default = werner_setup(family)
    elif args.state:
        state = read_state(args.state)
        alice_default = bob_default = None
    else:
        raise ParseError("witness needs a state file or --werner FAMILY:P")

    def pick(path, default):
        if path:
            return read_measurement_set(path)
        if args.builtin:
            return _builtin(args.builtin)
        if default is not None:
            return default
        raise ParseError("no measurements: give --alice/--bob files or --builtin")

    return state, pick(args.alice, alice_default), pick(args.bob, bob_default)


def cmd_witness(args) -> int:
    state, alice, bob = _witness_inputs(args)
    report = witness(state, alice, bob, maximize_pairing=args.maximize_pairing)
    result = {"state": state.label, "alice_set": alice.label, "bob_set": bob.label, **report.to_dict()}
    emit(args, run_manifest(args, [args.state, args.alice, args.bob]), result)
    return EXIT_OK


def fig2_rows(theta_min: float, theta_max: float, steps: int) -> list[tuple]:
    if not 0.0 <= theta_min <= theta_max <= math.pi + 1e-12:
        raise RangeError(f"need 0 <= theta_min <= theta_max <= pi, got [{theta_min}, {theta_max}]")
    if steps < 2:
        raise RangeError("steps must be >= 2")
    rows = []
    for theta in np.linspace(theta_min, theta_max, steps):
        mset = fig2_family(float(theta))
        steer = bounds.steering_bound(mset)
        ent = bounds.entanglement_bound(mset, mset)
        rut = bounds.rutkowski_bound(mset)
        if not (ent <= steer + ORDER_TOL and steer <= rut + ORDER_TOL):
            raise AssertionFailure(
                f"ordering broken at theta={theta!r}: entanglement {ent!r}, steering {steer!r}, overlap {rut!r}"
            )
        rows.append((float(theta), rut, steer, ent))
    return rows


def cmd_sweep_fig2(args) -> int:
    rows = fig2_rows(_angle(args.theta_min), _angle(args.theta_max), args.steps)
    header = ["theta", "rutkowski", "steering_bound", "entanglement_bound"]
    result = {"rows": [dict(zip(header, r)) for r in rows]}
    emit(args, run_manifest(args, []), result, (header, rows), fmt=args.format or "csv")
    return EXIT_OK


def _sig(x, digits=THRESHOLD_DIGITS):
    return None if x is None else float(f"{x:.{digits}g}")


def werner_sweep(family: str, grid: int) -> list[tuple]:
    alice, bob = werner_setup(family)
    rows = []
    for p in np.linspace(0.0, 1.0, grid):
        rep = witness(werner_state(family, float(p)), alice, bob)
        rows.append((float(p), rep.s_q, rep.steerable, rep.entangled))
    return rows


def cmd_werner(args) -> int:
    info = werner_thresholds(args.family)
    rut = info["rutkowski"]["closed_form"]
    result = {
        "family": args.family,
        "thresholds": {
            "steering": _sig(info["steering"]["closed_form"]),
            "entanglement": _sig(info["entanglement"]["closed_form"]),
            "rutkowski": "none ≤ 1" if rut is None else _sig(rut),
        },
        "closed_form": {k: info[k]["closed_form"] for k in ("steering", "entanglement", "rutkowski")},
        "bisection": {k: info[k]["bisection"] for k in ("steering", "entanglement")},
        "s_q_affine": info["s_q_affine"],
        "bounds": info["bounds"],
    }
    header = ["p", "s_q", "steerable", "entangled"]
    rows = werner_sweep(args.family, args.grid)
    manifest = run_manifest(args, [])
    if args.sweep_out:
        write_text(args.sweep_out, render_csv(manifest, header, rows))
    if (args.format or "json") == "csv":
        emit(args, manifest, result, (header, rows))
    else:
        result["sweep"] = [dict(zip(header, r)) for r in rows]
        emit(args, manifest, result)
    return EXIT_OK


def cmd_zeta(args) -> int:
    bob = _measurement_set(args.bob, args.builtin, "Bob")
    alice = read_measurement_set(args.alice) if args.alice else bob
    a = _ints(args.outcomes, "outcomes")
    perm = _ints(args.permutation, "permutation") if args.permutation else None
    result = {
        "outcomes": a,
        "permutation": perm if perm is not None else list(range(bob[0].n_outcomes)),
        "class": args.state_class,
        "zeta_quantum": zeta_quantum_diagonal(alice, bob, a, perm),
        "zeta_fgur": zeta_fgur(alice, a),
    }
    if args.state_class in ("separable", "all"):
        sep = zeta_separable(alice, bob, a, perm, restarts=args.restarts, seed=args.seed)
        result["zeta_separable"] = sep
        result["separable_le_quantum"] = bool(sep <= result["zeta_quantum"] + 1e-9)
    key = {"quantum": "zeta_quantum", "fgur": "zeta_fgur", "separable": "zeta_separable"}
    result["value"] = result[key.get(args.state_class, "zeta_quantum")]
    emit(args, run_manifest(args, [args.alice, args.bob]), result)
    return EXIT_OK


def _bound_overrides(path) -> dict:
    obj = read_json(path)
    if isinstance(obj, dict) and "result" in obj and isinstance(obj["result"], dict):
        obj = obj["result"]
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a bounds object")
    out = {}
    for key in ("steering_bound", "entanglement_bound"):
        if obj.get(key) is not None:
            if not isinstance(obj[key], (int, float)):
                raise ParseError(f"{path}: {key} must be a number")
            out[key] = float(obj[key])
    if obj.get("w_vector") is not None:
        out["w_vector"] = np.asarray(obj["w_vector"], dtype=float)
    if not out:
        raise ParseError(f"{path}: no steering_bound, entanglement_bound or w_vector found")
    return out


def cmd_verify(args) -> int:
    config = oracle.OracleConfig(seed=args.seed, samples=args.samples, grid_points=args.grid_points)
    sets = None
    if args.measurements or args.builtin:
        mset = _measurement_set(args.measurements, args.builtin, "measurement")
        sets = {mset.label or "input": mset}
    overrides = _bound_overrides(args.bounds_file) if args.bounds_file else None
    if overrides and sets is None:
        raise ParseError("--bounds-file needs the matching set via --measurements or --builtin")
    reports = oracle.run_suite(args.suite, config, sets, overrides)
    violations = sum(r["violations"] for r in reports)
    result = {"suite": args.suite, "passed": violations == 0, "reports": reports}
    if violations:
        result["worst"] = min(reports, key=lambda r: r["worst_margin"])
    emit(args, run_manifest(args, [args.measurements, args.bounds_file]), result)
    return EXIT_OK if violations == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common_flags(top: bool) -> argparse.ArgumentParser:
    # flags are accepted before or after the verb; only the top level carries defaults
    common = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=d(0), help="seed for every random choice (default 0)")
    common.add_argument("--out", default=d(None), help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=d(None))
    common.add_argument(
        "--builtin",
        default=d(None),
        help="named measurement set: pauli-zx, pauli-zx-anti, gellmann-148 or fig2:<theta>",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(top=False)
    parser = argparse.ArgumentParser(
        prog="qfgur",
        description="Majorization uncertainty bounds as steering and entanglement witnesses.",
        parents=[_common_flags(top=True)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="subset-norm ladder and derived bounds")
    p.add_argument("measurements", nargs="?", help="measurement-set JSON (Bob)")
    p.add_argument("--alice", help="Alice's measurement-set JSON; adds the entanglement bound")
    p.add_argument("--alice-builtin", help="named set for Alice")
    p.add_argument("--spectrum", help="comma-separated eigenvalues for spectrum-weighted bounds")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", parents=[common], help="evaluate a state against both witnesses")
    p.add_argument("state", nargs="?", help="bipartite density-matrix JSON")
    p.add_argument("--werner", help="use a Werner state instead, e.g. qubit:0.8 or qutrit:0.9")
    p.add_argument("--alice", help="Alice's measurement-set JSON")
    p.add_argument("--bob", help="Bob's measurement-set JSON")
    p.add_argument("--maximize-pairing", action="store_true", help="reorder Bob's outcomes for the largest S_Q")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sweep-fig2", parents=[common], help="bound comparison over the rotated-basis family")
    p.add_argument("--theta-min", default="0")
    p.add_argument("--theta-max", default="pi/2")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_sweep_fig2)

    p = sub.add_parser("werner", parents=[common], help="Werner-state noise thresholds")
    p.add_argument("family", choices=("qubit", "qutrit"))
    p.add_argument("--grid", type=int, default=101, help="points in the p sweep (default 101)")
    p.add_argument("--sweep-out", help="also write the p sweep as CSV here")
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("zeta", parents=[common], help="fine-grained bounds for one outcome tuple")
    p.add_argument("--bob", help="Bob's measurement-set JSON")
    p.add_argument("--alice", help="Alice's measurement-set JSON (default: same as Bob)")
    p.add_argument("--outcomes", required=True, help="Alice's outcome per setting, e.g. 0,0")
    p.add_argument("--permutation", help="Bob outcome permutation, e.g. 1,0 (default identity)")
    p.add_argument(
        "--class", dest="state_class", choices=("quantum", "separable", "fgur", "all"), default="quantum"
    )
    p.add_argument("--restarts", type=int, default=50, help="seesaw restarts for the separable class")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", parents=[common], help="run the sampling and brute-force oracles")
    p.add_argument("suite", choices=oracle.SUITES + ("all",))
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--grid-points", type=int, default=oracle.DEFAULT_GRID)
    p.add_argument("--measurements", help="restrict to this measurement-set JSON")
    p.add_argument("--bounds-file", help="check these bounds (steering_bound, entanglement_bound, w_vector)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AssertionFailure as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (QfgurError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
