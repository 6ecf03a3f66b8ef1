"""M-ary PSK constellations with Gray bit labels."""

from dataclasses import dataclass, field

import numpy as np

from dsm_vlc.bits import as_bits, bits_to_int, int_to_bits, to_gray


class InvalidOrderError(ValueError):
    pass


@dataclass(frozen=True)
class Constellation:
    """Ordered PSK point set.

    Point ``k`` sits at angle ``2*pi*k/M`` and carries the binary-reflected
    Gray code of ``k`` as its label, so angular neighbours differ in one bit.
    """

    order: int
    points: tuple
    labels: tuple
    _index_of_label: dict = field(repr=False, compare=False, hash=False)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def index_of_label(self, label_value: int) -> int:
        return self._index_of_label[label_value]

    def label_bits(self, index: int) -> np.ndarray:
        return int_to_bits(to_gray(index), self.bits_per_symbol)


def build_constellation(order: int) -> Constellation:
    if not isinstance(order, (int, np.integer)) or order < 2 or order & (order - 1):
        raise InvalidOrderError(f"PSK order must be a power of two >= 2, got {order!r}")
    order = int(order)
    k = np.arange(order)
    pts = np.exp(2j * np.pi * k / order)
    # snap the exact axis points so BPSK/QPSK are free of 1e-17 residue
    pts = np.where(np.abs(pts.real) < 1e-15, 1j * pts.imag, pts)
    pts = np.where(np.abs(pts.imag) < 1e-15, pts.real + 0j, pts)
    width = order.bit_length() - 1
    labels = tuple("".join(str(b) for b in int_to_bits(to_gray(i), width)) for i in range(order))
    index_of_label = {to_gray(i): i for i in range(order)}
    return Constellation(order, tuple(complex(p) for p in pts), labels, index_of_label)


def bits_to_symbol(c: Constellation, bits) -> complex:
    bits = as_bits(bits)
    if bits.size != c.bits_per_symbol:
        raise ValueError(f"expected {c.bits_per_symbol} bits per symbol, got {bits.size}")
    return c.points[c.index_of_label(bits_to_int(bits))]


def nearest_index(c: Constellation, v: complex) -> int:
    """Index of the point closest to ``v``; ties go to the lowest index."""
    d = np.abs(v - c.array) ** 2
    return int(np.argmin(d))


def nearest_symbol(c: Constellation, v: complex):
    """Return ``(point, label)`` of the point nearest to ``v``."""
    k = nearest_index(c, v)
    return c.points[k], c.labels[k]
