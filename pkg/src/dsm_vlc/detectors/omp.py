"""Vector-corrected orthogonal matching pursuit detector."""

from dataclasses import dataclass

import numpy as np

from dsm_vlc.codec import IndexTable, decode_indices
from dsm_vlc.constellation import Constellation
from dsm_vlc.detectors.common import (
    DetectionResult,
    check_pair,
    ensure_counter,
    measurement_matrix,
    normalize_columns,
)


class RankDeficiencyError(np.linalg.LinAlgError):
    """Normal equations of the selected atoms are singular."""

    def __init__(self, message, support):
        super().__init__(message)
        self.support = support


@dataclass
class OmpResult:
    support: list       # zero-based atom indices in selection order
    estimates: np.ndarray
    residual: np.ndarray


def omp_column_detect(obs, dictionary, sparsity: int = 1, counter=None, correlation=None) -> OmpResult:
    """Greedy sparse recovery of ``obs ~ dictionary @ x`` with ``sparsity`` atoms.

    Each iteration picks the atom with the largest ``|<atom, residual>|``
    (lowest index on ties), re-solves least squares on all picked atoms and
    updates the residual. The least-squares right-hand side ``B^H obs`` is read
    from the first correlation vector, which is ``D^H obs`` because the initial
    residual is ``obs``. Pass ``correlation=D^H obs`` when it is already known.
    """
    obs = np.asarray(obs, dtype=complex).reshape(-1)
    d = np.asarray(dictionary, dtype=complex)
    nr, n_atoms = d.shape
    if sparsity < 1 or sparsity > n_atoms:
        raise ValueError(f"sparsity must lie in [1, {n_atoms}], got {sparsity}")
    if obs.size != nr:
        raise ValueError(f"observation length {obs.size} != dictionary rows {nr}")
    counter = ensure_counter(counter)

    residual = obs
    support = []
    first = None
    est = np.zeros(0, dtype=complex)
    for e in range(1, sparsity + 1):
        if e == 1 and correlation is not None:
            corr = np.asarray(correlation, dtype=complex).reshape(-1)
        else:
            corr = d.conj().T @ residual
            counter.cmatmul(n_atoms, nr, 1)
        if first is None:
            first = corr
        mag = corr.real**2 + corr.imag**2
        counter.abs2(n_atoms)
        if support:
            mag = mag.copy()
            mag[support] = -1.0
        xi = int(np.argmax(mag))
        counter.compare(n_atoms - 1)
        support.append(xi)

        b = d[:, support]
        rhs = first[support]
        if e == 1:
            g = float(np.sum(b.real**2 + b.imag**2))
            counter.abs2(nr)
            counter.radd(nr - 1)
            if g <= np.finfo(float).tiny:
                raise RankDeficiencyError(f"atom {xi} has zero energy", support)
            est = rhs / g
            counter.rdiv(2)
        else:
            gram = b.conj().T @ b
            # Hermitian: e diagonal norms plus e(e-1)/2 off-diagonal products
            counter.abs2(e * nr)
            counter.radd(e * (nr - 1))
            counter.cmatmul(1, nr, 1, count=e * (e - 1) // 2)
            if np.linalg.matrix_rank(gram) < e:
                raise RankDeficiencyError(f"atoms {support} are linearly dependent", support)
            est = np.linalg.solve(gram, rhs)
            # Gaussian elimination plus back substitution, complex
            counter.cmul(e**3)
            counter.cadd(e**3)
        residual = obs - b @ est
        counter.cmatmul(nr, e, 1)
        counter.cadd(nr)
    return OmpResult(support, est, residual)


def correct_index_vector(v, table: IndexTable, counter=None) -> tuple:
    """Map a possibly illegal 1-based index vector to the closest legal one.

    A legal ``v`` is returned unchanged. Otherwise the legal vector with the
    most position-wise agreements wins; ties go to the lowest table rank.
    """
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.size != table.nt:
        raise ValueError(f"index vector must have {table.nt} entries, got {v.size}")
    agree = np.sum(table.array == (v - 1), axis=1)
    if counter is not None:
        counter.compare(table.q * table.nt + table.q - 1)
    return table.vectors[int(np.argmax(agree))]


def vc_omp_detect(y_cur, y_prev, table: IndexTable, c: Constellation, counter=None) -> DetectionResult:
    """Detect one block with per-slot single-atom pursuit plus index correction.

    Both received blocks are column-normalised and the normalised previous
    block serves as the dictionary. Row ``i`` of the measurement matrix is the
    (conjugated) correlation of slot ``i`` against every atom, so it seeds the
    first pursuit iteration. After the index vector is legalised, a slot whose
    index changed takes the correlation of its corrected atom as the symbol
    estimate, which is the exact least-squares value for a unit-norm atom.
    """
    y_cur, y_prev = check_pair(y_cur, y_prev)
    counter = ensure_counter(counter)
    start = counter.flops
    nt = y_cur.shape[1]
    if nt != table.nt:
        raise ValueError(f"blocks have {nt} columns but table is for nt={table.nt}")

    with counter.phase("normalize"):
        yc = normalize_columns(y_cur, counter)
        yp = normalize_columns(y_prev, counter)
    with counter.phase("measurement"):
        y_nom = measurement_matrix(yc, yp, counter)
    corr = y_nom.conj()  # corr[i] = Ybar_prev^H ybar_cur[:, i]

    v_hat = np.empty(nt, dtype=np.int64)
    raw = np.empty(nt, dtype=complex)
    with counter.phase("pursuit"):
        for i in range(nt):
            try:
                res = omp_column_detect(yc[:, i], yp, 1, counter, correlation=corr[i])
                v_hat[i] = res.support[0] + 1
                raw[i] = res.estimates[0]
            except RankDeficiencyError:
                k = int(np.argmax(np.abs(corr[i])))
                v_hat[i] = k + 1
                raw[i] = corr[i, k]

    with counter.phase("correction"):
        v = correct_index_vector(v_hat, table, counter)
        for i in range(nt):
            if v[i] != v_hat[i]:
                raw[i] = corr[i, v[i] - 1]

    pts = c.array
    with counter.phase("quantize"):
        diff = raw[:, None] - pts[None, :]
        sym = np.argmin(diff.real**2 + diff.imag**2, axis=1)
        counter.cadd(nt * c.order)
        counter.abs2(nt * c.order)
        counter.compare(nt * (c.order - 1))

    rank = table.rank_of(v)
    return DetectionResult(
        index_vector=v,
        symbols=pts[sym],
        bits=decode_indices(rank, sym, table, c),
        op_count=counter.flops - start,
    )
