"""File formats: delimited matrices, dataset manifests, surrogates, reports.

Matrix files are UTF-8 delimiter-separated values with one sample per row.
A dataset is a JSON manifest naming the input and output files plus the
fidelity tag and per-sample cost. Floats are written with ``repr`` so every
round trip is bit-exact.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from . import pca
from .errors import DataError
from .features import FeatureMap, InputScaler
from .regression import LinearModel
from .surrogates import HF, LF, Dataset, MFSurrogate

SURROGATE_FORMAT = "mflr-surrogate"
SURROGATE_VERSION = 1


def read_matrix(path, delimiter=","):
    """Parse a samples-as-rows matrix file into an (n_rows, n_cols) array."""
    rows = []
    width = None
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}", code="missing-file") from exc
    with handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(delimiter)]
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise DataError(f"ragged row at line {lineno} in {path}", code="ragged-row")
            try:
                values = [float(p) for p in parts]
            except ValueError:
                raise DataError(f"malformed value at line {lineno} in {path}", code="malformed-value") from None
            if not all(math.isfinite(v) for v in values):
                raise DataError(f"non-finite value at line {lineno} in {path}", code="non-finite")
            rows.append(values)
    if not rows:
        raise DataError(f"no data rows in {path}", code="empty")
    return np.asarray(rows, dtype=float)


def write_matrix(path, matrix, delimiter=","):
    """Write a samples-as-rows matrix with bit-exact float formatting."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise DataError("matrix files are 2-D", code="bad-shape")
    with open(path, "w", encoding="utf-8") as fh:
        for row in a:
            fh.write(delimiter.join(repr(float(v)) for v in row))
            fh.write("\n")


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {what} {path}: {exc}", code="missing-file") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{what} {path} is not valid JSON: {exc}", code="bad-json") from exc


def load_dataset(manifest_path):
    """Load a dataset from its JSON manifest.

    The manifest names sibling matrix files (paths resolved relative to the
    manifest) and carries the fidelity tag and cost:
    ``{"inputs": ..., "outputs": ..., "fidelity": "HF", "cost_per_sample": 1.0}``.
    """
    manifest = _read_json(manifest_path, "manifest")
    allowed = {"inputs", "outputs", "fidelity", "cost_per_sample", "delimiter"}
    unknown = sorted(set(manifest) - allowed)
    if unknown:
        raise DataError(f"unknown manifest key(s) in {manifest_path}: {unknown}", code="bad-manifest")
    for key in ("inputs", "outputs", "fidelity"):
        if key not in manifest:
            raise DataError(f"manifest {manifest_path} is missing {key!r}", code="bad-manifest")
    if manifest["fidelity"] not in (HF, LF):
        raise DataError(f"manifest fidelity must be HF or LF, got {manifest['fidelity']!r}", code="bad-manifest")
    base = Path(manifest_path).parent
    delimiter = manifest.get("delimiter", ",")
    inputs = read_matrix(base / manifest["inputs"], delimiter)
    outputs = read_matrix(base / manifest["outputs"], delimiter)
    if inputs.shape[0] != outputs.shape[0]:
        raise DataError(
            f"manifest {manifest_path}: inputs have {inputs.shape[0]} samples, "
            f"outputs have {outputs.shape[0]}",
            code="bad-shape",
        )
    return Dataset(
        inputs=inputs.T,
        outputs=outputs.T,
        fidelity=manifest["fidelity"],
        cost_per_sample=float(manifest.get("cost_per_sample", 1.0)),
    )


def save_dataset(directory, dataset: Dataset, stem):
    """Write ``<stem>_x.csv``, ``<stem>_y.csv`` and ``<stem>.json``; returns
    the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_matrix(directory / f"{stem}_x.csv", dataset.inputs.T)
    write_matrix(directory / f"{stem}_y.csv", dataset.outputs.T)
    manifest = {
        "inputs": f"{stem}_x.csv",
        "outputs": f"{stem}_y.csv",
        "fidelity": dataset.fidelity,
        "cost_per_sample": dataset.cost_per_sample,
    }
    path = directory / f"{stem}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


def _array_out(a):
    return np.asarray(a, dtype=float).tolist()


def _basis_out(basis):
    if basis is None:
        return None
    return {
        "basis": _array_out(basis.basis),
        "mean": _array_out(basis.mean),
        "singular_values": _array_out(basis.singular_values),
        "k": basis.k,
        "energy_tolerance": basis.energy_tolerance,
    }


def _basis_in(data):
    if data is None:
        return None
    return pca.ReducedBasis(
        basis=np.asarray(data["basis"], dtype=float).reshape(len(data["mean"]), data["k"]),
        mean=np.asarray(data["mean"], dtype=float),
        singular_values=np.asarray(data["singular_values"], dtype=float),
        k=int(data["k"]),
        energy_tolerance=float(data["energy_tolerance"]),
    )


def _model_out(model):
    if model is None:
        return None
    return {
        "input_dim": model.feature_map.input_dim,
        "degree": model.feature_map.degree,
        "coefficients": _array_out(model.coefficients),
    }


def _model_in(data):
    if data is None:
        return None
    fm = FeatureMap(int(data["input_dim"]), int(data["degree"]))
    coeffs = np.asarray(data["coefficients"], dtype=float).reshape(fm.p, -1)
    return LinearModel(feature_map=fm, coefficients=coeffs)


def _scaler_out(scaler):
    if scaler is None:
        return None
    return {"lower": _array_out(scaler.lower), "upper": _array_out(scaler.upper)}


def _scaler_in(data):
    if data is None:
        return None
    return InputScaler(
        lower=np.asarray(data["lower"], dtype=float),
        upper=np.asarray(data["upper"], dtype=float),
    )


def save_surrogate(path, surrogate: MFSurrogate, config_sha256=None):
    """Serialize a fitted surrogate to JSON."""
    payload = {
        "format": SURROGATE_FORMAT,
        "version": SURROGATE_VERSION,
        "variant": surrogate.variant,
        "config_sha256": config_sha256,
        "basis": _basis_out(surrogate.basis),
        "model": _model_out(surrogate.model),
        "scaler": _scaler_out(surrogate.scaler),
        "lf_basis": _basis_out(surrogate.lf_basis),
        "lf_model": _model_out(surrogate.lf_model),
        "lf_scaler": _scaler_out(surrogate.lf_scaler),
        "delta_basis": _basis_out(surrogate.delta_basis),
        "delta_model": _model_out(surrogate.delta_model),
        "delta_scaler": _scaler_out(surrogate.delta_scaler),
        "diagnostics": surrogate.diagnostics,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_surrogate(path):
    """Load a surrogate serialized by :func:`save_surrogate`."""
    data = _read_json(path, "surrogate file")
    if data.get("format") != SURROGATE_FORMAT:
        raise DataError(f"{path} is not a surrogate file", code="bad-format")
    if data.get("version") != SURROGATE_VERSION:
        raise DataError(f"unsupported surrogate version {data.get('version')!r}", code="bad-format")
    return MFSurrogate(
        variant=data["variant"],
        basis=_basis_in(data["basis"]),
        model=_model_in(data["model"]),
        scaler=_scaler_in(data["scaler"]),
        lf_basis=_basis_in(data["lf_basis"]),
        lf_model=_model_in(data["lf_model"]),
        lf_scaler=_scaler_in(data["lf_scaler"]),
        delta_basis=_basis_in(data["delta_basis"]),
        delta_model=_model_in(data["delta_model"]),
        delta_scaler=_scaler_in(data["delta_scaler"]),
        diagnostics=data.get("diagnostics", {}),
    )


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_benchmark_csv(path, report_dict):
    """Flat CSV view of a benchmark report (one row per method and n_hf)."""
    columns = ("method", "n_hf", "n_lf", "median", "p25", "p75", "equivalent_cost")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in report_dict["results"]:
            fh.write(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in columns))
            fh.write("\n")


def ensure_out_dir(path):
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {out}: {exc}", code="bad-out-dir") from exc
    if not os.access(out, os.W_OK):
        raise DataError(f"output directory {out} is not writable", code="bad-out-dir")
    return out
