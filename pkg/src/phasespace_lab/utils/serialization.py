"""File formats for signals, fields, masks, ascent reports and run results.

CSV floats are written with 17 significant digits and read back with
``float_precision="round_trip"``, so every float survives a round trip bit-exactly.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd

from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhaseGrid
from phasespace_lab.models.reports import AscentConfig, AscentReport
from phasespace_lab.models.scenario import RunResult
from phasespace_lab.models.signals import DistributionKind, PhaseSpaceField, Signal
from phasespace_lab.utils.errors import SerializationError

FLOAT_FORMAT = "%.17g"
_U64 = np.dtype("<u8")
_F64 = np.dtype("<f8")


def _read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _ensure_parent(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _interleave(values: np.ndarray) -> np.ndarray:
    pairs = np.empty(values.size * 2, dtype=_F64)
    flat = np.asarray(values, dtype=np.complex128).ravel()
    pairs[0::2] = flat.real
    pairs[1::2] = flat.imag
    return pairs


def _deinterleave(pairs: np.ndarray) -> np.ndarray:
    return pairs[0::2] + 1j * pairs[1::2]


# ═══════════════════════════════════════════════════════════════
# Signals: CSV index,t,re,im and binary (u64 n, f64 dt, n·(f64 re, f64 im))
# ═══════════════════════════════════════════════════════════════


def write_signal_csv(f: Signal, path: str | Path) -> Path:
    path = _ensure_parent(path)
    frame = pd.DataFrame(
        {"index": np.arange(f.grid.n), "t": f.grid.t, "re": f.values.real, "im": f.values.imag}
    )
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def read_signal_csv(path: str | Path) -> Signal:
    path = Path(path)
    frame = _read_csv(path)
    if list(frame.columns) != ["index", "t", "re", "im"]:
        raise SerializationError(path, f"unexpected columns {list(frame.columns)}")
    n = len(frame)
    # t_0 = −(n/2)·dt is an exact power-of-two scaling
    dt = float(-frame["t"].iloc[0] / (n // 2))
    values = frame["re"].to_numpy() + 1j * frame["im"].to_numpy()
    return Signal(grid=Grid1D(n=n, dt=dt), values=values)


def write_signal_binary(f: Signal, path: str | Path) -> Path:
    path = _ensure_parent(path)
    with open(path, "wb") as fh:
        fh.write(np.array([f.grid.n], dtype=_U64).tobytes())
        fh.write(np.array([f.grid.dt], dtype=_F64).tobytes())
        fh.write(_interleave(f.values).tobytes())
    return path


def read_signal_binary(path: str | Path) -> Signal:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 16:
        raise SerializationError(path, "truncated header")
    n = int(np.frombuffer(raw[:8], dtype=_U64)[0])
    dt = float(np.frombuffer(raw[8:16], dtype=_F64)[0])
    payload = np.frombuffer(raw[16:], dtype=_F64)
    if payload.size != 2 * n:
        raise SerializationError(path, f"expected {2 * n} floats, found {payload.size}")
    return Signal(grid=Grid1D(n=n, dt=dt), values=_deinterleave(payload))


# ═══════════════════════════════════════════════════════════════
# Phase-space fields: CSV ix,ixi,x,xi,re,im, binary, JSON sidecar
# ═══════════════════════════════════════════════════════════════


def phase_grid_spec(grid: PhaseGrid) -> dict:
    return {
        "x": {"n": grid.xgrid.n, "dt": grid.xgrid.dt},
        "xi": {"n": grid.xigrid.n, "dt": grid.xigrid.dt},
        "row_start": grid.row_start,
        "row_count": grid.row_count,
    }


def phase_grid_from_spec(spec: dict) -> PhaseGrid:
    return PhaseGrid(
        xgrid=Grid1D(**spec["x"]),
        xigrid=Grid1D(**spec["xi"]),
        row_start=spec["row_start"],
        row_count=spec["row_count"],
    )


def _sidecar(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".json")


def write_field_sidecar(field: PhaseSpaceField, path: str | Path) -> Path:
    target = _sidecar(Path(path))
    _write_json(target, {"kind": field.kind.value, "tau": field.tau, "grid": phase_grid_spec(field.grid)})
    return target


def _read_field_sidecar(path: Path) -> tuple[PhaseGrid, DistributionKind, float | None]:
    meta = json.loads(_sidecar(path).read_text(encoding="utf-8"))
    return phase_grid_from_spec(meta["grid"]), DistributionKind(meta["kind"]), meta.get("tau")


def write_field_csv(field: PhaseSpaceField, path: str | Path) -> Path:
    path = _ensure_parent(path)
    rows, cols = field.grid.shape
    ix, ixi = np.meshgrid(np.arange(rows) + field.grid.row_start, np.arange(cols), indexing="ij")
    values = np.asarray(field.values, dtype=np.complex128)
    frame = pd.DataFrame(
        {
            "ix": ix.ravel(),
            "ixi": ixi.ravel(),
            "x": field.grid.xgrid.t[ix.ravel()],
            "xi": field.grid.xi[ixi.ravel()],
            "re": values.real.ravel(),
            "im": values.imag.ravel(),
        }
    )
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    write_field_sidecar(field, path)
    return path


def read_field_csv(path: str | Path) -> PhaseSpaceField:
    path = Path(path)
    grid, kind, tau = _read_field_sidecar(path)
    frame = _read_csv(path)
    if len(frame) != grid.row_count * grid.xigrid.n:
        raise SerializationError(path, "row count does not match the sidecar grid")
    values = (frame["re"].to_numpy() + 1j * frame["im"].to_numpy()).reshape(grid.shape)
    if not frame["im"].any():
        values = values.real
    return PhaseSpaceField(grid=grid, values=values, kind=kind, tau=tau)


def write_field_binary(field: PhaseSpaceField, path: str | Path) -> Path:
    path = _ensure_parent(path)
    rows, cols = field.grid.shape
    with open(path, "wb") as fh:
        fh.write(np.array([rows, cols], dtype=_U64).tobytes())
        fh.write(_interleave(field.values).tobytes())
    write_field_sidecar(field, path)
    return path


def read_field_binary(path: str | Path) -> PhaseSpaceField:
    path = Path(path)
    grid, kind, tau = _read_field_sidecar(path)
    raw = path.read_bytes()
    if len(raw) < 16:
        raise SerializationError(path, "truncated header")
    rows, cols = (int(v) for v in np.frombuffer(raw[:16], dtype=_U64))
    if (rows, cols) != grid.shape:
        raise SerializationError(path, f"dims {(rows, cols)} disagree with sidecar {grid.shape}")
    payload = np.frombuffer(raw[16:], dtype=_F64)
    if payload.size != 2 * rows * cols:
        raise SerializationError(path, f"expected {2 * rows * cols} floats, found {payload.size}")
    values = _deinterleave(payload).reshape(rows, cols)
    if not values.imag.any():
        values = values.real
    return PhaseSpaceField(grid=grid, values=values, kind=kind, tau=tau)


# ═══════════════════════════════════════════════════════════════
# Masks: PBM (P1) bitmap, one text row per x row, plus sidecar
# ═══════════════════════════════════════════════════════════════


def write_mask(mask: DomainMask, path: str | Path) -> Path:
    path = _ensure_parent(path)
    rows, cols = mask.grid.shape
    lines = ["P1", f"{cols} {rows}"]
    lines += [" ".join("1" if c else "0" for c in row) for row in mask.cells]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    _write_json(_sidecar(path), {"grid": phase_grid_spec(mask.grid), "measure": mask.measure})
    return path


def read_mask(path: str | Path) -> DomainMask:
    path = Path(path)
    tokens = [
        tok
        for line in path.read_text(encoding="ascii").splitlines()
        if not line.startswith("#")
        for tok in line.split()
    ]
    if not tokens or tokens[0] != "P1":
        raise SerializationError(path, "not a P1 bitmap")
    cols, rows = int(tokens[1]), int(tokens[2])
    bits = np.array([t == "1" for t in tokens[3:]], dtype=bool)
    if bits.size != rows * cols:
        raise SerializationError(path, f"expected {rows * cols} pixels, found {bits.size}")
    meta = json.loads(_sidecar(path).read_text(encoding="utf-8"))
    return DomainMask(grid=phase_grid_from_spec(meta["grid"]), cells=bits.reshape(rows, cols))


# ═══════════════════════════════════════════════════════════════
# Ascent reports and run results
# ═══════════════════════════════════════════════════════════════


def ascent_config_echo(cfg: AscentConfig) -> dict:
    echo = cfg.model_dump(mode="json", exclude={"mask"})
    echo["mask"] = {"grid": phase_grid_spec(cfg.mask.grid), "measure": cfg.mask.measure, "cells": cfg.mask.count}
    return echo


def write_ascent_report(report: AscentReport, cfg: AscentConfig, path: str | Path) -> Path:
    """JSON summary at ``path``; the best signal goes next to it as ``<stem>.signal.bin``."""
    path = _ensure_parent(path)
    signal_path = path.with_name(path.stem + ".signal.bin")
    write_signal_binary(report.best_signal, signal_path)
    _write_json(
        path,
        {
            "config": ascent_config_echo(cfg),
            "best_value": report.best_value,
            "trace": report.trace,
            "converged": report.converged,
            "restart_values": report.restart_values,
            "best_restart": report.best_restart,
            "best_signal": signal_path.name,
        },
    )
    return path


def write_run_result(result: RunResult, out_dir: str | Path, stem: str | None = None) -> tuple[Path, Path]:
    """``<stem>.csv`` (param,measured,predicted,defect, sorted by param) and ``<stem>.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = stem or result.scenario.value
    csv_path = out / f"{stem}.csv"
    frame = pd.DataFrame(
        [r.model_dump() for r in result.sorted_rows()], columns=["param", "measured", "predicted", "defect"]
    )
    frame.to_csv(csv_path, index=False, float_format=FLOAT_FORMAT)
    json_path = out / f"{stem}.json"
    _write_json(
        json_path,
        {
            "scenario": result.scenario.value,
            "config": result.config,
            "grid": result.grid,
            "passed": result.passed,
            "checks": result.checks,
            "tolerance": result.tolerance,
            "extras": result.extras,
            "wall_time": result.wall_time,
        },
    )
    return csv_path, json_path


def read_run_rows(path: str | Path) -> pd.DataFrame:
    return _read_csv(Path(path))
