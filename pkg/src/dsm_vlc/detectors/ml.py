"""Exhaustive maximum-likelihood block detector."""

from functools import lru_cache

import numpy as np

from dsm_vlc.codec import IndexTable, decode_indices
from dsm_vlc.constellation import Constellation
from dsm_vlc.detectors.common import DetectionResult, check_pair, ensure_counter


@lru_cache(maxsize=16)
def ml_candidates(table: IndexTable, c: Constellation):
    """All ``q * M**nt`` candidate matrices in enumeration order.

    Order is table rank major, then symbol tuples with column 1 most
    significant. Returns ``(X, ranks, symbol_indices)``.
    """
    nt, m = table.nt, c.order
    sym = np.array(np.unravel_index(np.arange(m**nt), (m,) * nt)).T  # (m**nt, nt)
    ranks = np.repeat(np.arange(table.q), m**nt)
    syms = np.tile(sym, (table.q, 1))
    x = np.zeros((len(ranks), nt, nt), dtype=complex)
    rows = table.array[ranks]  # (K, nt)
    cols = np.broadcast_to(np.arange(nt), rows.shape)
    k = np.broadcast_to(np.arange(len(ranks))[:, None], rows.shape)
    x[k, rows, cols] = c.array[syms]
    x.setflags(write=False)
    return x, ranks, syms


def ml_detect(y_cur, y_prev, table: IndexTable, c: Constellation, counter=None) -> DetectionResult:
    y_cur, y_prev = check_pair(y_cur, y_prev)
    counter = ensure_counter(counter)
    start = counter.flops
    nr, nt = y_cur.shape
    x, ranks, syms = ml_candidates(table, c)
    n_cand = len(ranks)
    with counter.phase("ml_search"):
        diff = y_cur[None] - np.matmul(y_prev[None], x)
        metric = np.sum(diff.real**2 + diff.imag**2, axis=(1, 2))
        counter.cmatmul(nr, nt, nt, count=n_cand)
        counter.cadd(n_cand * nr * nt)
        counter.abs2(n_cand * nr * nt)
        counter.radd(n_cand * (nr * nt - 1))
        k = int(np.argmin(metric))
        counter.compare(n_cand - 1)
    rank, sym = int(ranks[k]), syms[k]
    return DetectionResult(
        index_vector=table.vectors[rank],
        symbols=c.array[sym],
        bits=decode_indices(rank, sym, table, c),
        op_count=counter.flops - start,
        metric=float(metric[k]),
    )
