"""Block generators shared by detector tests."""

import itertools

import numpy as np

from dsm_vlc.codec import bits_per_block, encode_block


def all_bit_blocks(table, c):
    nb = bits_per_block(table, c)
    return [np.array(b, dtype=np.uint8) for b in itertools.product((0, 1), repeat=nb)]


def all_states(table, c):
    """Every bit-carrying matrix; these are also all reachable S states at nt=2."""
    return [encode_block(b, table, c) for b in all_bit_blocks(table, c)]


def noisy_pair(h, table, c, rng, sigma):
    nb = bits_per_block(table, c)
    s_prev = encode_block(rng.integers(0, 2, nb), table, c)
    bits = rng.integers(0, 2, nb).astype(np.uint8)
    x = encode_block(bits, table, c)
    shape = (h.shape[0], table.nt)

    def noise():
        return sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    y_prev = h @ s_prev + noise()
    y_cur = h @ s_prev @ x + noise()
    return y_cur, y_prev, bits
