"""CSV and JSON file formats.

- Matrix CSV: one row per line, comma separated, no header by default.
  Values are written with shortest round-trip decimal representation, so a
  save/load cycle reproduces every finite double exactly.
- Graph JSON: ``{"n": int, "edges": [[i, j, weight], ...]}`` with 1-based
  node indices and i < j.
- Dataset sidecar JSON: at least ``{"P": int, "Q": int}`` next to the
  N x T data CSV; generators add their parameters and seed.

All writers are atomic: content goes to a temporary file in the target
directory and is moved into place with ``os.replace``, so a failing
command never leaves a partial file behind.
"""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataError
from .graphs import laplacian_from_weights, lower_triangle_indices, num_edges
from .signals import MaskedData, MultidomainData


def atomic_write_text(path, text: str) -> None:
    """Write text via a temporary file plus rename; never leaves a partial
    target file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_matrix(path, M: np.ndarray) -> None:
    """Write a 2-D array as CSV with full round-trip precision."""
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise DataError(f"expected a matrix, got array of ndim {M.ndim}")
    if not np.all(np.isfinite(M)):
        raise DataError("matrix contains non-finite values")
    lines = "\n".join(",".join(repr(float(v)) for v in row) for row in M)
    atomic_write_text(path, lines + "\n")


def load_matrix(path, header: bool = False) -> np.ndarray:
    """Read a CSV matrix; rejects ragged rows and non-finite values.

    Parameters
    ----------
    path : str or Path
    header : bool
        Skip the first line when True.
    """
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise DataError(
                    f"{path}: row {lineno} has {len(fields)} columns, expected {width}"
                )
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise DataError(f"{path}: row {lineno}: {exc}") from exc
            for col, v in enumerate(values, start=1):
                if not math.isfinite(v):
                    raise DataError(f"{path}: non-finite value at row {lineno}, column {col}")
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def save_graph_json(path, L: np.ndarray, threshold: float = 0.0) -> None:
    """Write a Laplacian's weighted edge list as JSON (1-based indices)."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    rows, cols = lower_triangle_indices(n)
    edges = []
    for i, j in zip(rows, cols):
        w = -float(L[i, j])
        if w > threshold:
            edges.append([int(j) + 1, int(i) + 1, w])
    atomic_write_text(path, json.dumps({"n": n, "edges": edges}, indent=1) + "\n")


def load_graph_json(path) -> np.ndarray:
    """Read a JSON edge list into a Laplacian.

    Indices are 1-based with i < j; a 0 index or an out-of-range node is a
    data error.
    """
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
    try:
        n = int(payload["n"])
        edges = payload["edges"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: expected keys 'n' and 'edges'") from exc
    if n < 1:
        raise DataError(f"{path}: node count must be positive, got {n}")
    w = np.zeros(num_edges(n))
    rows, cols = lower_triangle_indices(n)
    slot = {(int(j) + 1, int(i) + 1): k for k, (i, j) in enumerate(zip(rows, cols))}
    seen = set()
    for entry in edges:
        if len(entry) != 3:
            raise DataError(f"{path}: edge entries must be [i, j, weight], got {entry}")
        i, j, weight = int(entry[0]), int(entry[1]), float(entry[2])
        if i < 1 or j < 1:
            raise DataError(
                f"{path}: edge ({i}, {j}) uses 0-based indexing; nodes are 1-based"
            )
        if i >= j or j > n:
            raise DataError(f"{path}: edge ({i}, {j}) out of range for n = {n} (need 1 <= i < j <= n)")
        if weight < 0:
            raise DataError(f"{path}: negative weight on edge ({i}, {j})")
        if (i, j) in seen:
            raise DataError(f"{path}: duplicate edge ({i}, {j})")
        seen.add((i, j))
        w[slot[(i, j)]] = weight
    return laplacian_from_weights(w, n)


def save_json(path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc


def save_dataset(data_path, sidecar_path, data: MultidomainData, extra: dict | None = None) -> None:
    """Write the N x T data CSV plus its {"P", "Q", ...} sidecar."""
    save_matrix(data_path, data.data)
    payload = {"P": data.p, "Q": data.q}
    if extra:
        payload.update(extra)
    save_json(sidecar_path, payload)


def load_dataset(data_path, sidecar_path=None, p: int | None = None, q: int | None = None) -> MultidomainData:
    """Read a dataset from its CSV, taking P and Q from the sidecar or from
    explicit arguments."""
    X = load_matrix(data_path)
    if sidecar_path is not None:
        meta = load_json(sidecar_path)
        try:
            p, q = int(meta["P"]), int(meta["Q"])
        except (KeyError, TypeError) as exc:
            raise DataError(f"{sidecar_path}: sidecar must define P and Q") from exc
    if p is None or q is None:
        raise DataError("factor sizes unknown: pass a sidecar or explicit P and Q")
    try:
        return MultidomainData(X, p, q)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


def load_masked(data_path, mask_path, p: int, q: int, header: bool = False) -> MaskedData:
    """Read observations and their 0/1 mask from two aligned CSVs."""
    Y = load_matrix(data_path, header=header)
    mask = load_matrix(mask_path, header=header)
    try:
        return MaskedData(Y, mask, p, q)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
