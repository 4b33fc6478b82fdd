"""Compact, exact JSON encoding of residue matrices."""

from __future__ import annotations

import numpy as np

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def encode_matrix(a, p: int) -> dict:
    """Exact JSON form of a residue matrix.

    Sparse matrices become a list of [row, col, value] triples; dense ones
    store rows as strings of base-36 digits when p <= 36, else integer lists.
    """
    a = np.asarray(a, dtype=np.int64) % p
    if a.ndim == 1:
        a = a[:, None]
    rows, cols = a.shape
    nz = np.argwhere(a)
    if len(nz) * 12 < rows * cols:
        entries = [[int(i), int(j), int(a[i, j])] for i, j in nz]
        return {"p": p, "shape": [rows, cols], "entries": entries}
    if p <= 36:
        table = np.frombuffer(_ALPHABET.encode(), dtype=np.uint8)
        chars = table[a]
        data = [chars[i].tobytes().decode() for i in range(rows)]
    else:
        data = a.tolist()
    return {"p": p, "shape": [rows, cols], "rows": data}


def decode_matrix(d: dict) -> np.ndarray:
    rows, cols = d["shape"]
    out = np.zeros((rows, cols), dtype=np.int64)
    if "entries" in d:
        for i, j, v in d["entries"]:
            out[i, j] = v
        return out % d["p"]
    for i, r in enumerate(d["rows"]):
        if isinstance(r, str):
            out[i] = [int(c, 36) for c in r] if cols else []
        else:
            out[i] = r
    return out % d["p"]
