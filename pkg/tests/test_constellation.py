import itertools

import numpy as np
import pytest

from dsm_vlc.constellation import (
    InvalidOrderError,
    bits_to_symbol,
    build_constellation,
    nearest_symbol,
)


def test_bpsk_points_and_labels(bpsk):
    assert bpsk.points == (1 + 0j, -1 + 0j)
    assert bpsk.labels == ("0", "1")


def test_qpsk_gray_map(qpsk):
    np.testing.assert_allclose(qpsk.array, [1, 1j, -1, -1j], atol=1e-15)
    assert qpsk.labels == ("00", "01", "11", "10")


@pytest.mark.parametrize("order", [0, 1, 3, 6, -4])
def test_invalid_order(order):
    with pytest.raises(InvalidOrderError):
        build_constellation(order)


@pytest.mark.parametrize("order", [2, 4, 8, 16])
def test_invariants(order):
    c = build_constellation(order)
    pts = c.array
    np.testing.assert_allclose(np.abs(pts), 1.0, atol=1e-12)
    assert len(set(np.round(pts, 9))) == order
    for k in range(order):
        a, b = c.labels[k], c.labels[(k + 1) % order]
        assert sum(x != y for x, y in zip(a, b)) == 1
    assert sorted(c.labels) == ["".join(p) for p in itertools.product("01", repeat=c.bits_per_symbol)]
    assert abs(pts.mean()) < 1e-12


def test_bits_to_symbol(bpsk, qpsk):
    assert bits_to_symbol(bpsk, "0") == 1
    assert bits_to_symbol(qpsk, "11") == -1
    with pytest.raises(ValueError):
        bits_to_symbol(qpsk, "101")


def test_nearest_symbol(bpsk, qpsk):
    assert nearest_symbol(bpsk, 0.3 + 0.1j) == (1, "0")
    p, label = nearest_symbol(qpsk, -2j)
    assert abs(p - (-1j)) < 1e-15 and label == "10"
    assert nearest_symbol(bpsk, 0) == (1, "0")


@pytest.mark.parametrize("order", [2, 4])
def test_label_round_trip(order):
    c = build_constellation(order)
    for label in c.labels:
        assert nearest_symbol(c, bits_to_symbol(c, label))[1] == label
