"""Small helpers for bit vectors and binary-reflected Gray codes."""

import numpy as np


def as_bits(bits) -> np.ndarray:
    """Coerce a bit string ("0110"), a sequence of ints or an array to uint8 0/1."""
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits if ch not in " |,"]
    arr = np.asarray(bits, dtype=np.int64).reshape(-1)
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"bits must contain only 0/1, got {np.unique(arr)}")
    return arr.astype(np.uint8)


def to_gray(x: int) -> int:
    return x ^ (x >> 1)


def from_gray(g: int) -> int:
    x = g
    shift = g >> 1
    while shift:
        x ^= shift
        shift >>= 1
    return x


def int_to_bits(value: int, width: int) -> np.ndarray:
    # MSB first
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def bits_to_str(bits) -> str:
    return "".join(str(int(b)) for b in bits)
