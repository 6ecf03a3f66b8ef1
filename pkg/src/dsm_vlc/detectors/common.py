"""Types and block-level helpers shared by the detectors."""

from dataclasses import dataclass, field

import numpy as np

from dsm_vlc.flops import OpCounter


@dataclass
class DetectionResult:
    """Output of one block detection.

    ``index_vector`` is 1-based and always a legal table entry. ``op_count``
    is the FLOP tally of this call only. ``metric`` is the score the detector
    minimised (Frobenius residual for ML, fitness for the genetic search) when
    it has one.
    """

    index_vector: tuple
    symbols: np.ndarray
    bits: np.ndarray
    op_count: int
    metric: float = None
    trace: tuple = field(default=(), repr=False)


def ensure_counter(counter):
    return OpCounter() if counter is None else counter


def check_pair(y_cur, y_prev):
    y_cur = np.asarray(y_cur, dtype=complex)
    y_prev = np.asarray(y_prev, dtype=complex)
    if y_cur.ndim != 2 or y_cur.shape != y_prev.shape:
        raise ValueError(f"received blocks must share a 2-D shape, got {y_cur.shape} and {y_prev.shape}")
    return y_cur, y_prev


def normalize_columns(y, counter=None) -> np.ndarray:
    """Scale every column to unit Euclidean norm; all-zero columns stay zero."""
    y = np.asarray(y, dtype=complex)
    nr, nt = y.shape
    norms = np.sqrt(np.sum(y.real**2 + y.imag**2, axis=0))
    nonzero = norms > 0
    if counter is not None:
        counter.abs2(nr * nt)
        counter.radd((nr - 1) * nt)
        counter.sqrt(nt)
        counter.rdiv(2 * nr * int(nonzero.sum()))
    out = np.zeros_like(y)
    out[:, nonzero] = y[:, nonzero] / norms[nonzero]
    return out


def measurement_matrix(y_cur_n, y_prev_n, counter=None) -> np.ndarray:
    """``Ybar_cur^H @ Ybar_prev``.

    Entry ``(i, u)`` is the inner product of current column ``i`` with
    previous column ``u``, i.e. row ``i`` holds the first-iteration pursuit
    correlations for slot ``i`` (conjugated).
    """
    a = np.asarray(y_cur_n, dtype=complex)
    b = np.asarray(y_prev_n, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    nr, nt = a.shape
    if counter is not None:
        counter.cmatmul(nt, nr, nt)
    return a.conj().T @ b


def frobenius_metric(y_cur, y_prev, x) -> float:
    """ML objective ``||Y_cur - Y_prev X||_F^2``."""
    d = np.asarray(y_cur) - np.asarray(y_prev) @ np.asarray(x)
    return float(np.sum(d.real**2 + d.imag**2))
