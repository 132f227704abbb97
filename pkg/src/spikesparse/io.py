"""Bit-stable file I/O: instances, solutions, traces, event logs, phase grids.

All floats are serialized with shortest-round-trip decimal formatting, so
identical runs produce byte-identical files and reading back reproduces
every value exactly.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .diagnostics import TraceRecord
from .errors import MalformedFile
from .hopping import SpikeEvent
from .problems import GroundTruth, ProblemInstance, as_dictionary

TRACE_HEADER = ["t", "residual", "rel_residual", "energy", "l1", "l0", "spikes_cum", "analog_msgs_cum"]
EVENT_HEADER = ["time", "node", "sign"]
PHASE_HEADER = ["alpha", "beta", "mse_hda", "mse_lbi", "mse_diff", "l1_diff", "realizations"]

SOLUTION_FIELDS = ["u", "lambda", "t_final", "stop_reason", "rel_residual", "l1", "l0", "seed", "solver"]
INSTANCE_FIELDS = ["m", "n", "seed", "A", "u0", "f0"]


def _fmt(x) -> str:
    return repr(float(x))


def _load_json(path):
    path = Path(path)
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedFile(path, str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(path, f"invalid JSON at line {exc.lineno}, column {exc.colno}") from exc


def _require(data: dict, fields, path):
    for name in fields:
        if name not in data:
            raise MalformedFile(path, f"missing required field {name!r}")


# ---------------------------------------------------------------------------
# problem instances


def write_instance(path, instance: ProblemInstance) -> None:
    payload = {
        "m": instance.m,
        "n": instance.n,
        "seed": int(instance.seed),
        "A": [float(x) for x in instance.dictionary.entries.ravel(order="C")],
        "u0": [float(x) for x in instance.truth.values],
        "f0": [float(x) for x in instance.clean_signal],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_instance(path) -> ProblemInstance:
    data = _load_json(path)
    _require(data, INSTANCE_FIELDS, path)
    try:
        m, n = int(data["m"]), int(data["n"])
        A = np.asarray(data["A"], dtype=np.float64)
        if A.ndim == 1:
            A = A.reshape(m, n)
        u0 = np.asarray(data["u0"], dtype=np.float64)
        f0 = np.asarray(data["f0"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MalformedFile(path, f"bad numeric payload: {exc}") from exc
    if A.shape != (m, n) or u0.shape != (n,) or f0.shape != (m,):
        raise MalformedFile(path, f"inconsistent shapes for m={m}, n={n}")
    try:
        dictionary = as_dictionary(A)
    except ValueError as exc:
        raise MalformedFile(path, str(exc)) from exc
    support = np.flatnonzero(u0)
    truth = GroundTruth(values=u0, support=support, nz=int(support.size))
    return ProblemInstance(dictionary=dictionary, truth=truth, clean_signal=f0, seed=int(data["seed"]))


def read_matrix_csv(path) -> np.ndarray:
    """Dense matrix from CSV, one row per line."""
    rows = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(csv.reader(fh), start=1):
                if not line:
                    continue
                try:
                    rows.append([float(x) for x in line])
                except ValueError as exc:
                    raise MalformedFile(path, f"line {lineno}: {exc}") from exc
    except OSError as exc:
        raise MalformedFile(path, str(exc)) from exc
    if not rows:
        raise MalformedFile(path, "no rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MalformedFile(path, "ragged rows")
    return np.asarray(rows, dtype=np.float64)


def write_matrix_csv(path, matrix) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in matrix:
            writer.writerow([_fmt(x) for x in row])


# ---------------------------------------------------------------------------
# solutions


def write_solution(path, u, lam, t_final, stop_reason, rel_residual, l1, l0, seed, solver) -> None:
    payload = {
        "u": [float(x) for x in u],
        "lambda": float(lam),
        "t_final": float(t_final),
        "stop_reason": str(stop_reason),
        "rel_residual": float(rel_residual),
        "l1": float(l1),
        "l0": int(l0),
        "seed": int(seed),
        "solver": str(solver),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_solution(path) -> dict:
    data = _load_json(path)
    _require(data, SOLUTION_FIELDS, path)
    try:
        data["u"] = np.asarray(data["u"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MalformedFile(path, f"bad 'u' payload: {exc}") from exc
    return data


# ---------------------------------------------------------------------------
# traces and event logs


def write_trace(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for r in records:
            writer.writerow([
                _fmt(r.t), _fmt(r.residual), _fmt(r.rel_residual), _fmt(r.energy),
                _fmt(r.l1), int(r.l0), int(r.comm_events), int(r.analog_msgs),
            ])


def read_trace(path) -> list[TraceRecord]:
    records = []
    try:
        with open(path) as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != TRACE_HEADER:
                raise MalformedFile(path, f"bad header {header}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    records.append(TraceRecord(
                        t=float(row[0]), residual=float(row[1]), rel_residual=float(row[2]),
                        energy=float(row[3]), l1=float(row[4]), l0=int(row[5]),
                        comm_events=int(row[6]), analog_msgs=int(row[7]),
                    ))
                except (IndexError, ValueError) as exc:
                    raise MalformedFile(path, f"line {lineno}: {exc}") from exc
    except OSError as exc:
        raise MalformedFile(path, str(exc)) from exc
    return records


def write_events(path, events) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVENT_HEADER)
        for e in events:
            writer.writerow([_fmt(e.time), int(e.node), int(e.sign)])


def read_events(path) -> list[SpikeEvent]:
    events = []
    try:
        with open(path) as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != EVENT_HEADER:
                raise MalformedFile(path, f"bad header {header}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    events.append(SpikeEvent(time=float(row[0]), node=int(row[1]), sign=int(row[2])))
                except (IndexError, ValueError) as exc:
                    raise MalformedFile(path, f"line {lineno}: {exc}") from exc
    except OSError as exc:
        raise MalformedFile(path, str(exc)) from exc
    return events


# ---------------------------------------------------------------------------
# phase grids


def write_phase_grid(path, grid) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PHASE_HEADER)
        for cell in grid.cells:
            writer.writerow([
                _fmt(cell.alpha), _fmt(cell.beta), _fmt(cell.mse_hda), _fmt(cell.mse_lbi),
                _fmt(cell.mse_diff), _fmt(cell.l1_diff), int(grid.realizations),
            ])


def write_metadata(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
