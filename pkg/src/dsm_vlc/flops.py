"""Floating-point operation accounting for the detectors.

Convention (fixed here, used everywhere):

* complex multiply        = 4 real multiplies + 2 real additions
* complex add/subtract    = 2 real additions
* ``|z|^2``               = 2 real multiplies + 1 real addition
* ``|z|``                 = ``|z|^2`` plus one square root
* real division and square root are tallied as multiplies
* comparisons (argmax/argmin/sorting/agreement counts) are tallied separately
  and excluded from :attr:`OpCounter.flops`

Detectors call the counter at each arithmetic call site with the shapes they
actually compute, so the tally tracks the executed work rather than a model.
"""

from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class OpTally:
    real_multiplies: int = 0
    real_additions: int = 0
    comparisons: int = 0

    @property
    def flops(self) -> int:
        return self.real_multiplies + self.real_additions

    def __add__(self, other: "OpTally") -> "OpTally":
        return OpTally(
            self.real_multiplies + other.real_multiplies,
            self.real_additions + other.real_additions,
            self.comparisons + other.comparisons,
        )


@dataclass
class OpCounter(OpTally):
    """Running FLOP tally with optional per-phase breakdown."""

    phases: dict = field(default_factory=dict)
    _phase: str = "other"

    @contextmanager
    def phase(self, name: str):
        prev, self._phase = self._phase, name
        try:
            yield self
        finally:
            self._phase = prev

    def _bump(self, mul: int = 0, add: int = 0, cmp: int = 0):
        if mul < 0 or add < 0 or cmp < 0:
            raise ValueError("operation counts must be non-negative")
        self.real_multiplies += mul
        self.real_additions += add
        self.comparisons += cmp
        t = self.phases.get(self._phase)
        if t is None:
            t = self.phases[self._phase] = OpTally()
        t.real_multiplies += mul
        t.real_additions += add
        t.comparisons += cmp

    def rmul(self, n: int = 1):
        self._bump(mul=n)

    def rdiv(self, n: int = 1):
        self._bump(mul=n)

    def sqrt(self, n: int = 1):
        self._bump(mul=n)

    def radd(self, n: int = 1):
        self._bump(add=n)

    def cmul(self, n: int = 1):
        self._bump(mul=4 * n, add=2 * n)

    def cadd(self, n: int = 1):
        self._bump(add=2 * n)

    def abs2(self, n: int = 1):
        self._bump(mul=2 * n, add=n)

    def cabs(self, n: int = 1):
        self._bump(mul=3 * n, add=n)

    def compare(self, n: int = 1):
        self._bump(cmp=n)

    def cmatmul(self, m: int, k: int, n: int, count: int = 1):
        """Dense ``(m x k) @ (k x n)`` complex product, repeated ``count`` times."""
        self.cmul(count * m * n * k)
        self.cadd(count * m * n * (k - 1))

    def total(self) -> OpTally:
        return OpTally(self.real_multiplies, self.real_additions, self.comparisons)

    def merge(self, other: "OpCounter"):
        for name, t in other.phases.items():
            with self.phase(name):
                self._bump(t.real_multiplies, t.real_additions, t.comparisons)


def ml_candidate_flops(nt: int, nr: int) -> int:
    """FLOPs of one Frobenius metric ``||Y - Y_prev X||_F^2`` with a dense ``X``."""
    product = nr * nt * nt * 6 + nr * nt * (nt - 1) * 2
    residual = nr * nt * 2
    norm = nr * nt * 3 + (nr * nt - 1)
    return product + residual + norm


def count_ml(nt: int, nr: int, m_order: int, q: int) -> int:
    """Closed-form FLOPs of exhaustive ML for one block.

    Every one of the ``q * m_order**nt`` candidates is assembled as a full
    ``nt x nt`` matrix and scored as ``||Y - Y_prev @ X||_F^2``: a dense
    complex product, ``nr*nt`` complex subtractions, ``nr*nt`` squared
    magnitudes and ``nr*nt - 1`` additions.
    """
    if min(nt, nr, m_order, q) < 1:
        raise ValueError("all dimensions must be >= 1")
    return q * m_order**nt * ml_candidate_flops(nt, nr)


def _reference_blocks(nt: int, nr: int, m_order: int):
    """Deterministic noiseless block pair on a synthetic channel."""
    import numpy as np

    from dsm_vlc.codec import build_index_table, encode_block, bits_per_block
    from dsm_vlc.constellation import build_constellation

    table = build_index_table(nt)
    c = build_constellation(m_order)
    rng = np.random.default_rng(12345)
    h = 1e-5 * (1.0 + rng.random((nr, nt)))
    s_prev = encode_block(rng.integers(0, 2, bits_per_block(table, c)), table, c)
    x = encode_block(rng.integers(0, 2, bits_per_block(table, c)), table, c)
    y_prev = h @ s_prev
    y_cur = y_prev @ x
    return y_cur, y_prev, table, c


def count_scheme_a(nt: int, nr: int, m_order: int) -> int:
    """Instrumented FLOPs of the vector-corrected OMP detector on one block."""
    from dsm_vlc.detectors import vc_omp_detect

    y_cur, y_prev, table, c = _reference_blocks(nt, nr, m_order)
    counter = OpCounter()
    vc_omp_detect(y_cur, y_prev, table, c, counter=counter)
    return counter.flops


def count_scheme_b(nt: int, nr: int, m_order: int, g_t: int = 10, a_pop: int = None) -> int:
    """Instrumented FLOPs of the OMP-seeded genetic detector on one block."""
    import numpy as np

    from dsm_vlc.detectors import GaParams, ga_detect

    y_cur, y_prev, table, c = _reference_blocks(nt, nr, m_order)
    params = GaParams(population_size=a_pop, generations=g_t)
    counter = OpCounter()
    ga_detect(y_cur, y_prev, table, c, params, np.random.default_rng(0), counter=counter)
    return counter.flops
