"""CSV time series with JSON sidecars, written atomically."""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .ensemble import EnsembleResult
from .observables import CSV_CHANNELS, TimeSeries

CSV_HEADER = ("t",) + CSV_CHANNELS
SIGNIFICANT_DIGITS = 12


def _version():
    from . import __version__

    return __version__


def format_csv(series):
    cols = [series.channel(name) for name in CSV_HEADER]
    fmt = f".{SIGNIFICANT_DIGITS}g"
    lines = [",".join(CSV_HEADER)]
    for row in zip(*cols):
        lines.append(",".join(format(float(v), fmt) for v in row))
    return "\n".join(lines) + "\n"


@contextmanager
def staged(path):
    """Yield a temp path next to ``path``; rename onto ``path`` only on success."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    os.close(fd)
    try:
        yield Path(tmp)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _write_text(tmp, text):
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_text_atomic(path, text):
    path = Path(path)
    try:
        with staged(path) as tmp:
            _write_text(tmp, text)
            os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_csv(series, path):
    write_text_atomic(path, format_csv(series))


def read_csv(path, backend="MeanField", estimator=None):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = np.empty((0, len(CSV_HEADER)))
    cols = {name: data[:, i] for i, name in enumerate(CSV_HEADER)}
    meta_path = path.with_suffix(".json")
    kwargs = {}
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        kwargs = {"backend": meta.get("backend", backend), "estimator": meta.get("estimator")}
    else:
        kwargs = {"backend": backend}
    if estimator is not None:
        kwargs["estimator"] = estimator
    if kwargs.get("estimator") is None:
        kwargs.pop("estimator", None)
    return TimeSeries(**cols, **kwargs)


def sidecar(scenario, series, extra=None):
    from .scenario_io import scenario_to_dict

    meta = {
        "artifact_version": _version(),
        "scenario": scenario_to_dict(scenario),
        "backend": series.backend,
        "estimator": series.estimator,
        "integrator": dataclasses.asdict(scenario.integrator),
        "seed": int(scenario.seed),
        "steps": int(series.steps),
        "samples": len(series),
        "time_unit": f"{scenario.reference_rate_symbol} t",
    }
    if extra:
        meta.update(extra)
    return meta


def write_run(result, scenario, stem):
    """Write ``<stem>.csv`` and ``<stem>.json`` (plus ``<stem>.stderr.csv`` for ensembles).

    Every file is staged first and renamed only after all of them were written,
    so a failure leaves no partial output.
    """
    stem = Path(stem)
    files = {}
    extra = {}
    if isinstance(result, EnsembleResult):
        series = result.mean_series
        err_path = stem.with_name(stem.name + ".stderr.csv")
        files[err_path] = format_csv(result.stderr_series)
        extra = {"n_traj": result.n_traj, "root_seed": int(result.root_seed),
                 "stderr_csv": err_path.name}
    else:
        series = result
    csv_path = stem.with_name(stem.name + ".csv")
    json_path = stem.with_name(stem.name + ".json")
    files[csv_path] = format_csv(series)
    meta = sidecar(scenario, series, extra)
    meta["csv"] = csv_path.name
    files[json_path] = json.dumps(meta, indent=2, sort_keys=True) + "\n"

    stem.parent.mkdir(parents=True, exist_ok=True)
    staged_files = []
    try:
        for path, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
            os.close(fd)
            staged_files.append((Path(tmp), path))
            _write_text(tmp, text)
    except OSError as exc:
        for tmp, _ in staged_files:
            tmp.unlink(missing_ok=True)
        raise OSError(f"cannot write {stem}: {exc}") from exc
    for tmp, path in staged_files:
        os.replace(tmp, path)
    return [path for _, path in staged_files]
