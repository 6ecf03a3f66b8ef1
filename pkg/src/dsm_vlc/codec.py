"""Activation-index tables and the DSM block encoder/decoder.

A block is an ``Nt x Nt`` complex matrix. The bit-carrying matrix of a block is
``X = P_q @ diag(p_1..p_Nt)`` where column ``i`` of the permutation matrix
``P_q`` has its single one at row ``f_q[i]`` (1-based index vector).
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from dsm_vlc.bits import as_bits, bits_to_int, from_gray, int_to_bits, to_gray
from dsm_vlc.constellation import Constellation

MAX_NT = 8


class IllegalIndexError(ValueError):
    """Raised when an index vector is not one of the table's legal vectors."""


@dataclass(frozen=True)
class IndexTable:
    nt: int
    q: int
    vectors: tuple
    spatial_labels: tuple
    _rank: dict = field(repr=False, compare=False, hash=False)

    @property
    def spatial_bits(self) -> int:
        return self.q.bit_length() - 1

    @cached_property
    def array(self) -> np.ndarray:
        """``(q, nt)`` array of zero-based index vectors."""
        return np.array(self.vectors, dtype=np.int64) - 1

    def rank_of(self, v) -> int:
        try:
            return self._rank[tuple(int(x) for x in v)]
        except KeyError:
            raise IllegalIndexError(f"index vector {tuple(v)} is not in the legal table") from None

    def rank_of_label(self, label_bits) -> int:
        return from_gray(bits_to_int(label_bits))

    def label_bits(self, rank: int) -> np.ndarray:
        return int_to_bits(to_gray(rank), self.spatial_bits)

    def permutation_matrix(self, rank: int) -> np.ndarray:
        p = np.zeros((self.nt, self.nt))
        p[self.array[rank], np.arange(self.nt)] = 1.0
        return p


def build_index_table(nt: int) -> IndexTable:
    if not 2 <= nt <= MAX_NT:
        raise ValueError(f"nt must lie in [2, {MAX_NT}], got {nt}")
    width = int(math.floor(math.log2(math.factorial(nt))))
    q = 2**width
    vectors = tuple(itertools.islice(itertools.permutations(range(1, nt + 1)), q))
    labels = tuple("".join(map(str, int_to_bits(to_gray(r), width))) for r in range(q))
    return IndexTable(nt, q, vectors, labels, {v: r for r, v in enumerate(vectors)})


def bits_per_block(table: IndexTable, c: Constellation) -> int:
    return table.spatial_bits + table.nt * c.bits_per_symbol


def split_block_bits(bits, table: IndexTable, c: Constellation):
    """Return ``(rank, symbol_indices)`` for one block of bits."""
    bits = as_bits(bits)
    need = bits_per_block(table, c)
    if bits.size != need:
        raise ValueError(f"block needs {need} bits, got {bits.size}")
    b = table.spatial_bits
    k = c.bits_per_symbol
    rank = table.rank_of_label(bits[:b])
    sym = [c.index_of_label(bits_to_int(bits[b + i * k : b + (i + 1) * k])) for i in range(table.nt)]
    return rank, sym


def assemble_block(rank: int, symbols, table: IndexTable) -> np.ndarray:
    x = np.zeros((table.nt, table.nt), dtype=complex)
    x[table.array[rank], np.arange(table.nt)] = symbols
    return x


def encode_block(bits, table: IndexTable, c: Constellation) -> np.ndarray:
    """Map one block of bits to its bit-carrying matrix ``X``.

    The leading ``floor(log2(Nt!))`` bits pick the index vector (Gray label),
    the remaining bits are the PSK labels of ``p_1..p_Nt`` in column order.
    """
    rank, sym = split_block_bits(bits, table, c)
    points = c.array
    return assemble_block(rank, points[sym], table)


def differential_encode(s_prev: np.ndarray, x: np.ndarray) -> np.ndarray:
    s_prev = np.asarray(s_prev)
    x = np.asarray(x)
    if s_prev.ndim != 2 or s_prev.shape != x.shape or s_prev.shape[0] != s_prev.shape[1]:
        raise ValueError(f"blocks must be equal square matrices, got {s_prev.shape} and {x.shape}")
    return s_prev @ x


def decode_block(v, symbols, table: IndexTable, c: Constellation) -> np.ndarray:
    """Inverse of :func:`encode_block` given a legal index vector and symbols."""
    rank = table.rank_of(v)
    if len(symbols) != table.nt:
        raise ValueError(f"expected {table.nt} symbols, got {len(symbols)}")
    pts = c.array
    parts = [table.label_bits(rank)]
    for s in symbols:
        parts.append(c.label_bits(int(np.argmin(np.abs(s - pts)))))
    return np.concatenate(parts).astype(np.uint8)


def decode_indices(rank: int, symbol_indices, table: IndexTable, c: Constellation) -> np.ndarray:
    parts = [table.label_bits(rank)] + [c.label_bits(int(k)) for k in symbol_indices]
    return np.concatenate(parts).astype(np.uint8)


def is_generalized_permutation(block: np.ndarray, tol: float = 1e-9) -> bool:
    nz = np.abs(block) > tol
    return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))
