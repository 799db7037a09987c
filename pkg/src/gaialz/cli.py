"""Command-line front end: model files in, CSV out.

Model files are strict JSON (unknown keys rejected); every command writes
RFC-4180 CSV with a header row, CRLF line endings, and floats in
scientific notation with 17 significant digits, so identical inputs yield
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import csv

import numpy as np

from .analysis import ComparisonRow, compare_gaia_oracle, p34, p34_zeros
from .errors import RuntimeFailure, ShapeMismatch, ValidationError
from .gaia_grid import gaia_validity_margin, smatrix_grid
from .gaia_lzsm import (
    destructive_condition,
    propagate_lzsm,
    solve_destructive,
    thread_count,
)
from .models import GridModel, build_grid, build_lzsm, build_spin_boson

__all__ = [
    "RunSpec",
    "main",
    "cmd_grid",
    "cmd_lzsm",
    "cmd_compare",
    "cmd_interference",
    "model_from_payload",
]

_SWEEP_NAMES = ("eta", "v", "x", "Delta", "gamma", "Omega")


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunSpec:
    """Parsed invocation: command, file paths, sweep, and knobs."""

    command: str
    model_path: str
    out_path: str
    sweep: Optional[Tuple[str, float, float, int]] = None
    crossings: Optional[int] = None
    tol: Optional[float] = None
    window: Optional[Tuple[float, float]] = None
    seed: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_sweep(text: str) -> Tuple[str, float, float, int]:
    name, _, rest = text.partition("=")
    parts = rest.split(":")
    if not rest or len(parts) != 3:
        raise _UsageError(f"--sweep expects NAME=START:STOP:COUNT, got {text!r}")
    if name not in _SWEEP_NAMES:
        raise _UsageError(
            f"unknown sweep parameter {name!r}; choose from {', '.join(_SWEEP_NAMES)}"
        )
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"--sweep bounds must be numbers, got {text!r}")
    if count < 1:
        raise _UsageError(f"--sweep count must be >= 1, got {count}")
    return name, start, stop, count


def _parse_window(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"--window expects A:B, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise _UsageError(f"--window bounds must be numbers, got {text!r}")
    return lo, hi


def _parse_args(argv) -> RunSpec:
    parser = _Parser(prog="gaialz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("grid", "S-matrix of a ramp model"),
        ("lzsm", "trace + S-matrix of a driven model"),
        ("compare", "GAIA vs exact propagation"),
        ("interference", "interference zeros / return-condition solutions"),
    ):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--model", required=True, help="model JSON path")
        cmd.add_argument("--out", required=True, help="output CSV path")
        cmd.add_argument("--sweep", default=None, help="NAME=START:STOP:COUNT")
        cmd.add_argument("--crossings", type=int, default=None)
        cmd.add_argument("--tol", type=float, default=None)
        cmd.add_argument("--window", default=None, help="A:B oracle window")
        cmd.add_argument("--seed", type=int, default=None)
    ns = parser.parse_args(argv)
    return RunSpec(
        command=ns.command,
        model_path=ns.model,
        out_path=ns.out,
        sweep=_parse_sweep(ns.sweep) if ns.sweep else None,
        crossings=ns.crossings,
        tol=ns.tol,
        window=_parse_window(ns.window) if ns.window else None,
        seed=ns.seed,
    )


def _expect_number(payload, key):
    value = payload[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ShapeMismatch(f"model key {key!r} must be a number")
    return float(value)


def _expect_int(payload, key):
    value = payload[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ShapeMismatch(f"model key {key!r} must be an integer")
    return value


def _parse_coupling(raw) -> list:
    if not isinstance(raw, list):
        raise ShapeMismatch("model key 'b' must be a list of rows")
    block = []
    for row in raw:
        if not isinstance(row, list):
            raise ShapeMismatch("model key 'b' must be a list of rows")
        entries = []
        for cell in row:
            if (
                not isinstance(cell, dict)
                or set(cell) != {"re", "im"}
                or any(
                    isinstance(v, bool) or not isinstance(v, (int, float))
                    for v in cell.values()
                )
            ):
                raise ShapeMismatch(
                    "coupling entries must be objects {\"re\": num, \"im\": num}"
                )
            entries.append(complex(cell["re"], cell["im"]))
        block.append(entries)
    return block


_KEYS = {
    "grid": {"type", "N", "v", "eta", "a", "b"},
    "lzsm": {"type", "N", "v", "eta", "a", "b", "crossings"},
    "spin_boson": {"type", "n_boson", "v", "eta", "Delta", "gamma", "Omega", "crossings"},
}
_REQUIRED = {
    "grid": {"type", "N", "v", "eta", "a", "b"},
    "lzsm": {"type", "N", "v", "eta", "a", "b"},
    "spin_boson": {"type", "n_boson", "v", "eta", "Delta", "gamma", "Omega"},
}


def model_from_payload(payload, crossings: Optional[int] = None):
    """Build a model from a parsed JSON object, rejecting unknown keys."""
    if not isinstance(payload, dict):
        raise ShapeMismatch("model file must contain a JSON object")
    kind = payload.get("type")
    if kind not in _KEYS:
        raise ShapeMismatch(
            f"model 'type' must be one of {sorted(_KEYS)}, got {kind!r}"
        )
    unknown = set(payload) - _KEYS[kind]
    if unknown:
        raise ShapeMismatch(f"unknown model keys for type {kind}: {sorted(unknown)}")
    missing = _REQUIRED[kind] - set(payload)
    if missing:
        raise ShapeMismatch(f"missing model keys for type {kind}: {sorted(missing)}")
    v = _expect_number(payload, "v")
    eta = _expect_number(payload, "eta")
    if crossings is None and "crossings" in payload:
        crossings = _expect_int(payload, "crossings")
    if kind == "spin_boson":
        return build_spin_boson(
            Delta=_expect_number(payload, "Delta"),
            gamma=_expect_number(payload, "gamma"),
            Omega=_expect_number(payload, "Omega"),
            v=v,
            eta=eta,
            n_boson=_expect_int(payload, "n_boson"),
            n_crossings=20 if crossings is None else crossings,
        )
    n = _expect_int(payload, "N")
    a = payload["a"]
    if not isinstance(a, list) or any(
        isinstance(x, bool) or not isinstance(x, (int, float)) for x in a
    ):
        raise ShapeMismatch("model key 'a' must be a list of numbers")
    b = _parse_coupling(payload["b"])
    if kind == "grid":
        return build_grid(n, v, eta, a, b)
    return build_lzsm(n, v, eta, a, b, n_crossings=20 if crossings is None else crossings)


def _load_payload(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ShapeMismatch(f"cannot read model file {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeMismatch(f"model file {path} is not valid JSON: {exc}")


def _swept_payload(payload: dict, name: str, value: float) -> dict:
    """A copy of the payload with one sweep parameter substituted."""
    out = dict(payload)
    if name in ("eta", "v"):
        out[name] = value
        return out
    if name == "x":
        if payload.get("type") != "grid":
            raise ShapeMismatch("sweep parameter 'x' applies to grid models only")
        a = payload["a"]
        span = max(a) - min(a)
        if span <= 0:
            raise ShapeMismatch("sweep parameter 'x' needs a nonzero offset span")
        eta = float(out.get("eta"))
        v = float(out.get("v"))
        scale = value / (math.sqrt(eta / v) * span)
        out["a"] = [x * scale for x in a]
        return out
    if payload.get("type") != "spin_boson":
        raise ShapeMismatch(f"sweep parameter {name!r} applies to spin_boson models only")
    out[name] = value
    return out


def _format(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.16e}"


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(cell) for cell in row])


def _smatrix_path(out_path: str) -> str:
    if out_path.endswith(".csv"):
        return out_path[:-4] + ".smatrix.csv"
    return out_path + ".smatrix.csv"


def _smatrix_rows(smat):
    for i in range(1, smat.dim + 1):
        for j in range(1, smat.dim + 1):
            entry = smat.matrix[i - 1, j - 1]
            yield (i, j, entry.real, entry.imag, abs(entry) ** 2)


def cmd_grid(spec: RunSpec) -> int:
    payload = _load_payload(spec.model_path)
    if isinstance(payload, dict) and payload.get("type") != "grid":
        raise ShapeMismatch("the grid command needs a model of type 'grid'")
    model = model_from_payload(payload, spec.crossings)
    smat = smatrix_grid(model)
    _write_csv(
        spec.out_path,
        ("row", "col", "S_re", "S_im", "prob"),
        _smatrix_rows(smat),
    )
    return 0


def cmd_lzsm(spec: RunSpec) -> int:
    payload = _load_payload(spec.model_path)
    if isinstance(payload, dict) and payload.get("type") == "grid":
        raise ShapeMismatch("the lzsm command needs a driven model")
    model = model_from_payload(payload, spec.crossings)
    trace, smat = propagate_lzsm(model, initial_state=1)
    header = ("time",) + tuple(f"P_{k}" for k in range(1, model.dim + 1))
    rows = (
        (trace.times[idx],) + tuple(trace.probabilities[idx])
        for idx in range(len(trace.times))
    )
    _write_csv(spec.out_path, header, rows)
    _write_csv(
        _smatrix_path(spec.out_path),
        ("row", "col", "S_re", "S_im", "prob"),
        _smatrix_rows(smat),
    )
    return 0


def _compare_point(payload, spec: RunSpec, parameter: float, name: Optional[str]):
    swept = payload if name is None else _swept_payload(payload, name, parameter)
    model = model_from_payload(swept, spec.crossings)
    tolerance = 1e-8 if spec.tol is None else spec.tol
    if isinstance(model, GridModel):
        observables = [
            (i, j)
            for i in range(1, model.dim + 1)
            for j in range(1, model.dim + 1)
        ]
    else:
        observables = list(range(1, model.dim + 1))
    try:
        return compare_gaia_oracle(
            model,
            observables,
            parameter=parameter,
            window=spec.window,
            tolerance=tolerance,
        )
    except RuntimeFailure:
        margin = gaia_validity_margin(model)
        if isinstance(model, GridModel):
            smat = smatrix_grid(model)
            return [
                ComparisonRow(
                    parameter=parameter,
                    observable=f"P_{i}_{j}",
                    p_gaia=smat.probability(i, j),
                    p_exact=math.nan,
                    diff=math.nan,
                    margin=margin,
                    status="ERROR",
                )
                for i, j in observables
            ]
        trace, _ = propagate_lzsm(model, initial_state=1)
        return [
            ComparisonRow(
                parameter=float(trace.times[idx]),
                observable=f"P_{level}",
                p_gaia=float(trace.probabilities[idx, level - 1]),
                p_exact=math.nan,
                diff=math.nan,
                margin=margin,
                status="ERROR",
            )
            for level in observables
            for idx in range(len(trace.times))
        ]


def cmd_compare(spec: RunSpec) -> int:
    payload = _load_payload(spec.model_path)
    if spec.sweep is None:
        points = [(math.nan, None)]
    else:
        name, start, stop, count = spec.sweep
        points = [(float(x), name) for x in np.linspace(start, stop, count)]
    workers = min(thread_count(), len(points))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(
                pool.map(lambda p: _compare_point(payload, spec, p[0], p[1]), points)
            )
    else:
        blocks = [_compare_point(payload, spec, value, name) for value, name in points]
    rows = [
        (r.parameter, r.observable, r.p_gaia, r.p_exact, r.diff, r.margin, r.status)
        for block in blocks
        for r in block
    ]
    _write_csv(
        spec.out_path,
        ("parameter", "observable", "P_gaia", "P_exact", "diff", "margin", "status"),
        rows,
    )
    return 3 if any(row[-1] == "ERROR" for row in rows) else 0


def cmd_interference(spec: RunSpec) -> int:
    payload = _load_payload(spec.model_path)
    if spec.sweep is None:
        raise _UsageError("interference requires --sweep")
    name, start, stop, count = spec.sweep
    tol = 1e-3 if spec.tol is None else spec.tol
    rows = []
    if payload.get("type") == "grid":
        if name != "x":
            raise ShapeMismatch("grid interference sweeps the parameter 'x'")

        def family(x: float):
            return model_from_payload(_swept_payload(payload, "x", x))

        for x in p34_zeros(family, np.linspace(start, stop, count)):
            rows.append(("p34_zero", x, p34(family(x)).p34))
    else:
        if name != "eta":
            raise ShapeMismatch("driven interference sweeps the parameter 'eta'")
        if payload.get("type") == "spin_boson":
            # The scan varies the adiabaticity scale of one drive pattern:
            # the drive-relative boson frequency sqrt(eta/v)*Omega stays at
            # the value the file implies, so Omega co-varies with eta.
            anchor = (
                math.sqrt(_expect_number(payload, "eta") / _expect_number(payload, "v"))
                * _expect_number(payload, "Omega")
            )

            def family(eta: float):
                swept = dict(payload)
                swept["eta"] = eta
                swept["Omega"] = anchor / math.sqrt(eta / float(payload["v"]))
                return model_from_payload(swept, spec.crossings)

        else:

            def family(eta: float):
                return model_from_payload(
                    _swept_payload(payload, "eta", eta), spec.crossings
                )

        for eta in solve_destructive(family, (start, stop), tol=tol):
            check = destructive_condition(family(eta), tolerance=tol)
            if check.holds:
                rows.append(("destructive_eta", eta, max(check.residuals)))
    _write_csv(spec.out_path, ("kind", "value", "residual"), rows)
    return 0


_DISPATCH = {
    "grid": cmd_grid,
    "lzsm": cmd_lzsm,
    "compare": cmd_compare,
    "interference": cmd_interference,
}


def _emit_error(code: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "detail": detail}) + "\n")


def main(argv=None) -> int:
    try:
        spec = _parse_args(argv)
        return _DISPATCH[spec.command](spec)
    except _UsageError as exc:
        _emit_error("Usage", str(exc))
        return 1
    except ValidationError as exc:
        _emit_error(exc.code, str(exc))
        return 2
    except RuntimeFailure as exc:
        _emit_error(exc.code, str(exc))
        return 3


if __name__ == "__main__":
    sys.exit(main())
