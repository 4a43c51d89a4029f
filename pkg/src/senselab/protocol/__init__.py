"""Plug-and-play sensor wire protocol: codec, calibration, host session."""

from .codec import (
    DEFAULT_CHANNELS,
    DEFAULT_PERIOD_MS,
    MAX_PAYLOAD,
    PROTOCOL_VERSION,
    SYNC,
    CalibrationRangeError,
    CalibrationRecord,
    ChannelSpec,
    ChecksumError,
    Frame,
    FrameError,
    FrameType,
    Measurement,
    NackReason,
    NoSyncError,
    OversizeError,
    ProtocolError,
    SensorDescriptor,
    SensorType,
    TruncatedFrameError,
    Unit,
    apply_calibration,
    crc16,
    decode_data_payload,
    decode_descriptor_payload,
    decode_frame,
    decode_nack_payload,
    decode_start_payload,
    encode_data_payload,
    encode_descriptor_payload,
    encode_frame,
    encode_nack_payload,
    encode_start_payload,
    from_fixed,
    to_fixed,
)
from .host import (
    DEFAULT_HANDSHAKE_TIMEOUT,
    DeviceAbsentError,
    HostSession,
    ReadTimeout,
    StreamDecoder,
    StreamStats,
)

__all__ = [
    "DEFAULT_CHANNELS",
    "DEFAULT_HANDSHAKE_TIMEOUT",
    "DEFAULT_PERIOD_MS",
    "MAX_PAYLOAD",
    "PROTOCOL_VERSION",
    "SYNC",
    "CalibrationRangeError",
    "CalibrationRecord",
    "ChannelSpec",
    "ChecksumError",
    "DeviceAbsentError",
    "Frame",
    "FrameError",
    "FrameType",
    "HostSession",
    "Measurement",
    "NackReason",
    "NoSyncError",
    "OversizeError",
    "ProtocolError",
    "ReadTimeout",
    "SensorDescriptor",
    "SensorType",
    "StreamDecoder",
    "StreamStats",
    "TruncatedFrameError",
    "Unit",
    "apply_calibration",
    "crc16",
    "decode_data_payload",
    "decode_descriptor_payload",
    "decode_frame",
    "decode_nack_payload",
    "decode_start_payload",
    "encode_data_payload",
    "encode_descriptor_payload",
    "encode_frame",
    "encode_nack_payload",
    "encode_start_payload",
    "from_fixed",
    "to_fixed",
]
