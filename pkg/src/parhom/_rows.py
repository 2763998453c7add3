"""Vectorized helpers for arrays whose rows are fixed-width integer tuples.

Rows are compared lexicographically.  Encoding each row as a big-endian
fixed-width byte string makes byte order equal numeric order, so sorting,
deduplication and membership lookups reduce to plain numpy string ops.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "row_keys",
    "lexsort_rows",
    "unique_rows",
    "searchsorted_rows",
    "rows_in",
]


def row_keys(a: np.ndarray) -> np.ndarray:
    """Byte keys for the rows of a 2-D non-negative integer array."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    n, w = a.shape
    if n == 0:
        return np.empty(0, dtype=f"S{max(4 * w, 1)}")
    # big-endian u4 keeps byte-lexicographic order equal to numeric order
    enc = np.ascontiguousarray(a.astype(">u4"))
    return np.frombuffer(enc.tobytes(), dtype=f"S{4 * w}")


def lexsort_rows(a: np.ndarray) -> np.ndarray:
    """Rows of `a` sorted lexicographically (stable, returns a copy)."""
    a = np.asarray(a)
    if len(a) == 0:
        return a.copy()
    order = np.argsort(row_keys(a), kind="stable")
    return a[order]


def unique_rows(a: np.ndarray) -> np.ndarray:
    """Distinct rows of `a` in lexicographic order."""
    a = np.asarray(a)
    if len(a) == 0:
        return a.copy()
    keys = row_keys(a)
    order = np.argsort(keys, kind="stable")
    keep = np.empty(len(a), dtype=bool)
    keep[0] = True
    np.not_equal(keys[order][1:], keys[order][:-1], out=keep[1:])
    return a[order][keep]


def searchsorted_rows(sorted_rows: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Positions of `queries` in lex-sorted `sorted_rows` (searchsorted left)."""
    return np.searchsorted(row_keys(sorted_rows), row_keys(queries))


def rows_in(sorted_rows: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Boolean mask: which query rows occur in lex-sorted `sorted_rows`."""
    queries = np.asarray(queries)
    if len(queries) == 0:
        return np.zeros(0, dtype=bool)
    if len(sorted_rows) == 0:
        return np.zeros(len(queries), dtype=bool)
    keys = row_keys(sorted_rows)
    qk = row_keys(queries)
    pos = np.searchsorted(keys, qk)
    ok = pos < len(keys)
    ok[ok] = keys[pos[ok]] == qk[ok]
    return ok
