"""Numba kernel for left-to-right Z2 column reduction.

Columns are sorted row-index arrays in a CSR layout.  The kernel is
single-threaded over its span and releases the GIL, so disjoint spans can be
reduced concurrently from Python threads on shared inputs.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def reduce_span(entries, offsets, span_start, span_end, relative,
                row_base, low_to_col, col_start, col_len, col_low,
                pool, pool_used):
    """Reduce columns [span_start, span_end) against state + earlier columns.

    State arrays (low_to_col, col_start, col_len, col_low) are indexed by
    id - row_base and must cover every row/column the span can touch.  In
    relative mode entries below span_start are dropped before reducing.
    Returns (pool, pool_used, additions); pool may have been reallocated.
    """
    cur = np.empty(256, np.int64)
    tmp = np.empty(256, np.int64)
    cap = pool.shape[0]
    used = pool_used
    adds = 0
    for j in range(span_start, span_end):
        a = offsets[j]
        b = offsets[j + 1]
        if b - a > cur.shape[0]:
            cur = np.empty(2 * (b - a), np.int64)
        n = 0
        for t in range(a, b):
            r = entries[t]
            if relative and r < span_start:
                continue
            cur[n] = r
            n += 1
        while n > 0:
            r = cur[n - 1]
            c = low_to_col[r - row_base]
            if c < 0:
                if used + n > cap:
                    ncap = max(2 * cap, used + n)
                    npool = np.empty(ncap, np.int64)
                    npool[:used] = pool[:used]
                    pool = npool
                    cap = ncap
                pool[used:used + n] = cur[:n]
                col_start[j - row_base] = used
                col_len[j - row_base] = n
                col_low[j - row_base] = r
                low_to_col[r - row_base] = j
                used += n
                break
            adds += 1
            cs = col_start[c - row_base]
            cl = col_len[c - row_base]
            if n + cl > tmp.shape[0]:
                tmp = np.empty(2 * (n + cl), np.int64)
            ia = 0
            ib = 0
            k = 0
            while ia < n and ib < cl:
                x = cur[ia]
                y = pool[cs + ib]
                if x < y:
                    tmp[k] = x
                    ia += 1
                    k += 1
                elif y < x:
                    tmp[k] = y
                    ib += 1
                    k += 1
                else:
                    ia += 1
                    ib += 1
            while ia < n:
                tmp[k] = cur[ia]
                ia += 1
                k += 1
            while ib < cl:
                tmp[k] = pool[cs + ib]
                ib += 1
                k += 1
            sw = cur
            cur = tmp
            tmp = sw
            n = k
        if n == 0:
            col_len[j - row_base] = 0
            col_low[j - row_base] = -1
    return pool, used, adds
