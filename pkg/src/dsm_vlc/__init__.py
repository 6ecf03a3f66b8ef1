"""Differential spatial modulation over indoor visible-light MIMO links.

Link-level simulator with three block detectors (exhaustive ML, vector-corrected
OMP and OMP-seeded genetic search), FLOP instrumentation and BER sweeps.
"""

from dsm_vlc.constellation import Constellation, build_constellation
from dsm_vlc.codec import IndexTable, build_index_table, encode_block, decode_block, differential_encode
from dsm_vlc.channel import RoomConfig, ChannelModel, build_channel_matrix, apply_channel
from dsm_vlc.flops import OpCounter
from dsm_vlc.detectors import DetectionResult, GaParams, ml_detect, vc_omp_detect, ga_detect

__version__ = "0.1.0"

__all__ = [
    "Constellation",
    "build_constellation",
    "IndexTable",
    "build_index_table",
    "encode_block",
    "decode_block",
    "differential_encode",
    "RoomConfig",
    "ChannelModel",
    "build_channel_matrix",
    "apply_channel",
    "OpCounter",
    "DetectionResult",
    "GaParams",
    "ml_detect",
    "vc_omp_detect",
    "ga_detect",
]
