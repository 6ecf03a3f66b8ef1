import numpy as np
import pytest

from dsm_vlc.channel import RoomConfig, build_channel_matrix
from dsm_vlc.codec import build_index_table
from dsm_vlc.constellation import build_constellation


@pytest.fixture(scope="session")
def bpsk():
    return build_constellation(2)


@pytest.fixture(scope="session")
def qpsk():
    return build_constellation(4)


@pytest.fixture(scope="session")
def table2():
    return build_index_table(2)


@pytest.fixture(scope="session")
def table4():
    return build_index_table(4)


@pytest.fixture(scope="session")
def room_h2():
    return build_channel_matrix(RoomConfig.default(2, 2)).h


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
