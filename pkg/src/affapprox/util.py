"""Shared plumbing: deterministic parallel maps and canonical JSON."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def run_cells(fn, cells, parallelism=1):
    """Map `fn` over independent work cells, preserving cell order.

    Results are merged by cell index, so the output is identical for any
    parallelism setting.
    """
    cells = list(cells)
    if parallelism <= 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, cells))


def jsonify(obj):
    """Convert numpy containers/scalars to plain JSON-serializable values."""
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonify(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def canonical_json_bytes(obj) -> bytes:
    """Canonical (sorted keys, fixed layout) UTF-8 encoding of a report."""
    return (json.dumps(jsonify(obj), sort_keys=True, indent=2) + "\n").encode("utf-8")


def dump_json(obj, path) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_json_bytes(obj))
