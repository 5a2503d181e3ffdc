"""Reading and writing relations, cell sets, reports and renders."""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .relation import Carrier, CellSet, Relation

__all__ = [
    "REPORT_FORMAT",
    "REPORT_SCHEMA",
    "relation_to_rle",
    "relation_from_rle",
    "dense_from_rle",
    "dump_bits",
    "load_bits",
    "pgm_bytes",
    "parse_pgm",
    "morse_dot",
    "atomic_write",
    "dumps_report",
]

REPORT_FORMAT = "conley-report/1"

_BITS_MAGIC = b"CRL1"


def relation_to_rle(rel: Relation) -> dict:
    """Cardinality plus, per row, a flat ``[start, length, start, length, ...]`` run list."""
    dense = rel.to_dense()
    rows = []
    for r in dense:
        padded = np.concatenate(([False], r, [False])).astype(np.int8)
        d = np.diff(padded)
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        runs = np.empty(2 * starts.size, dtype=np.int64)
        runs[0::2] = starts
        runs[1::2] = ends - starts
        rows.append(runs.tolist())
    return {"size": rel.size, "cardinality": rel.cardinality(), "rows": rows}


def dense_from_rle(data: dict) -> np.ndarray:
    n = int(data["size"])
    rows = data["rows"]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    dense = np.zeros((n, n), dtype=bool)
    for i, runs in enumerate(rows):
        if len(runs) % 2:
            raise ValueError(f"row {i} has an odd run list")
        for start, length in zip(runs[0::2], runs[1::2]):
            dense[i, start : start + length] = True
    if int(dense.sum()) != int(data["cardinality"]):
        raise ValueError("cardinality does not match row runs")
    return dense


def relation_from_rle(data: dict, carrier: Carrier) -> Relation:
    return Relation.from_dense(carrier, dense_from_rle(data))


def dump_bits(rel: Relation) -> bytes:
    """Row-major bit dump: magic, uint32 size, then packed little-endian rows."""
    return _BITS_MAGIC + struct.pack("<I", rel.size) + rel.words.astype("<u8").tobytes()


def load_bits(data: bytes, carrier: Carrier) -> Relation:
    if data[:4] != _BITS_MAGIC:
        raise ValueError("not a relation bit dump")
    (n,) = struct.unpack("<I", data[4:8])
    if n != carrier.size:
        raise ValueError(f"dump has size {n}, carrier has {carrier.size}")
    words = np.frombuffer(data[8:], dtype="<u8").reshape(n, carrier.n_words)
    return Relation(carrier, words)


def cellset_to_list(s: CellSet) -> list[int]:
    return s.indices()


def pgm_bytes(dense: np.ndarray) -> bytes:
    """Binary P5 image, one pixel per entry: 0 where related, 255 elsewhere."""
    dense = np.asarray(dense, dtype=bool)
    h, w = dense.shape
    pixels = np.where(dense, 0, 255).astype(np.uint8)
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def parse_pgm(data: bytes) -> np.ndarray:
    """Inverse of :func:`pgm_bytes` for our own headers (no comments)."""
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("expected maxval 255")
    pixels = np.frombuffer(parts[4], dtype=np.uint8)
    if pixels.size != w * h:
        raise ValueError("pixel count does not match header")
    return pixels.reshape(h, w)


def morse_dot(sizes: list[int], edges: list[tuple[int, int]]) -> str:
    lines = ["digraph morse {"]
    for k, n in enumerate(sizes):
        lines.append(f'  c{k} [label="n={n}"];')
    for a, b in edges:
        lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def atomic_write(path: str | os.PathLike, data: bytes | str) -> Path:
    """Write to a temp file beside ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


_RLE = {
    "type": "object",
    "required": ["size", "cardinality", "rows"],
    "properties": {
        "size": {"type": "integer", "minimum": 1},
        "cardinality": {"type": "integer", "minimum": 0},
        "rows": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}

_INDEX_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "format",
        "system",
        "grid",
        "ladder",
        "carrier",
        "rungs",
        "relation",
        "omega",
        "conley_def",
        "conley_alt",
        "routes_equal",
        "chain_recurrent",
        "chain_recurrent_def",
        "components",
        "morse",
        "identities",
        "identities_ok",
    ],
    "properties": {
        "format": {"const": REPORT_FORMAT},
        "system": {"type": "object", "required": ["name", "params"]},
        "grid": {
            "type": "object",
            "required": ["domain", "cells_per_axis"],
            "properties": {"cells_per_axis": {"type": "integer", "minimum": 2}},
        },
        "ladder": {
            "type": "object",
            "required": ["values", "include_identity_floor"],
            "properties": {
                "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "include_identity_floor": {"type": "boolean"},
            },
        },
        "seed": {"type": ["integer", "null"]},
        "carrier": {
            "type": "object",
            "required": ["size", "cell_radius", "metric"],
            "properties": {"size": {"type": "integer", "minimum": 1}},
        },
        "rungs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["eps", "phi_cardinality", "lhs_cardinality", "rhs_cardinality"],
            },
        },
        "relation": _RLE,
        "omega": _RLE,
        "conley_def": _RLE,
        "conley_alt": _RLE,
        "routes_equal": {"type": "boolean"},
        "chain_recurrent": {
            "type": "object",
            "required": ["indices", "centers"],
            "properties": {"indices": _INDEX_LIST, "centers": {"type": "array"}},
        },
        "chain_recurrent_def": {
            "type": "object",
            "required": ["indices"],
            "properties": {"indices": _INDEX_LIST},
        },
        "components": {"type": "array", "items": _INDEX_LIST},
        "morse": {
            "type": "object",
            "required": ["nodes", "edges"],
            "properties": {
                "nodes": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "members"],
                        "properties": {"id": {"type": "string", "pattern": "^c[0-9]+$"}},
                    },
                },
                "edges": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                },
            },
        },
        "identities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "holds", "required", "counterexample"],
            },
        },
        "identities_ok": {"type": "boolean"},
    },
}
