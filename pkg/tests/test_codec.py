import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dsm_vlc.codec import (
    IllegalIndexError,
    bits_per_block,
    build_index_table,
    decode_block,
    differential_encode,
    encode_block,
    is_generalized_permutation,
)
from dsm_vlc.constellation import build_constellation


def test_table_nt2(table2):
    assert table2.q == 2
    assert table2.vectors == ((1, 2), (2, 1))
    assert table2.spatial_labels == ("0", "1")


def test_table_nt4(table4):
    assert table4.q == 16
    assert table4.spatial_bits == 4
    assert len(table4.spatial_labels[0]) == 4


@pytest.mark.parametrize("nt", [1, 0, 9])
def test_table_range(nt):
    with pytest.raises(ValueError):
        build_index_table(nt)


@pytest.mark.parametrize("nt", [2, 3, 4, 5])
def test_table_invariants(nt):
    t = build_index_table(nt)
    assert t.q == 2 ** math.floor(math.log2(math.factorial(nt)))
    assert len(set(t.vectors)) == t.q
    for v in t.vectors:
        assert sorted(v) == list(range(1, nt + 1))
    b = t.spatial_bits
    assert sorted(t.spatial_labels) == ["".join(p) for p in itertools.product("01", repeat=b)]
    for a, c in zip(t.spatial_labels, t.spatial_labels[1:]):
        assert sum(x != y for x, y in zip(a, c)) == 1


def test_encode_examples(table2, bpsk):
    np.testing.assert_array_equal(encode_block("0|0,0", table2, bpsk), np.eye(2))
    x = encode_block("1|1,0", table2, bpsk)
    np.testing.assert_array_equal(x, [[0, 1], [-1, 0]])


def test_encode_bit_count(table4, qpsk):
    assert bits_per_block(table4, qpsk) == 12
    x = encode_block(np.zeros(12, dtype=int), table4, qpsk)
    assert x.shape == (4, 4)
    with pytest.raises(ValueError):
        encode_block(np.zeros(11, dtype=int), table4, qpsk)


def test_differential_identity_chain(table2, bpsk):
    x = encode_block("1|1,0", table2, bpsk)
    s0 = np.eye(2)
    np.testing.assert_array_equal(differential_encode(s0, x), x)
    s = s0
    for _ in range(5):
        s = differential_encode(s, np.eye(2))
    np.testing.assert_array_equal(s, s0)


def test_differential_hand_product():
    s_prev = np.array([[0, -1], [1, 0]], dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    np.testing.assert_array_equal(differential_encode(s_prev, x), [[-1, 0], [0, 1]])


def test_differential_shape_mismatch():
    with pytest.raises(ValueError):
        differential_encode(np.eye(2), np.eye(3))


def _all_blocks(table, c):
    nb = bits_per_block(table, c)
    return [np.array(b) for b in itertools.product((0, 1), repeat=nb)]


@pytest.mark.parametrize("order", [2, 4])
def test_round_trip_exhaustive_nt2(table2, order):
    c = build_constellation(order)
    for bits in _all_blocks(table2, c):
        x = encode_block(bits, table2, c)
        v = tuple(int(np.flatnonzero(x[:, i])[0]) + 1 for i in range(2))
        syms = [x[v[i] - 1, i] for i in range(2)]
        np.testing.assert_array_equal(decode_block(v, syms, table2, c), bits)


def test_round_trip_random_nt4(table4, qpsk, rng):
    for _ in range(1000):
        bits = rng.integers(0, 2, 12)
        x = encode_block(bits, table4, qpsk)
        v = tuple(int(np.flatnonzero(x[:, i])[0]) + 1 for i in range(4))
        syms = [x[v[i] - 1, i] for i in range(4)]
        np.testing.assert_array_equal(decode_block(v, syms, table4, qpsk), bits)


def test_decode_illegal(table2, bpsk):
    with pytest.raises(IllegalIndexError):
        decode_block((1, 1), [1, 1], table2, bpsk)


def test_closure_exhaustive_nt2(table2, bpsk):
    blocks = [encode_block(b, table2, bpsk) for b in _all_blocks(table2, bpsk)]
    for a in blocks:
        for b in blocks:
            assert is_generalized_permutation(differential_encode(a, b))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=24, max_size=24))
def test_closure_random_nt4(bits):
    t = build_index_table(4)
    c = build_constellation(4)
    a = encode_block(bits[:12], t, c)
    b = encode_block(bits[12:], t, c)
    prod = differential_encode(a, b)
    assert is_generalized_permutation(prod)
    nz = prod[np.abs(prod) > 1e-9]
    np.testing.assert_allclose(np.abs(nz), 1.0, atol=1e-12)
