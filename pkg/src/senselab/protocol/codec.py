"""Byte-exact framing codec for the plug-and-play sensor wire protocol.

On-wire frame layout (big-endian throughout):

    | Offset | Size | Field       |
    |--------|------|-------------|
    | 0      | 2    | sync  0xAA 0x55                      |
    | 2      | 1    | version (0x01)                       |
    | 3      | 1    | frame type                           |
    | 4      | 1    | payload length (0..64)               |
    | 5      | N    | payload                              |
    | 5+N    | 2    | CRC-16/CCITT-FALSE over version..payload |

All numeric measurement values travel as signed 32-bit fixed point scaled
by 100 (calibration gain by 1e6) so that host and device agree bit-exactly
on every platform.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import IntEnum

SYNC = b"\xaa\x55"
PROTOCOL_VERSION = 0x01
MAX_PAYLOAD = 64

# Frame size for a given payload length: sync(2) + header(3) + payload + crc(2).
FRAME_OVERHEAD = 7


class FrameType(IntEnum):
    IDENT_REQ = 0x01
    IDENT_RESP = 0x02
    START = 0x03
    STOP = 0x04
    DATA = 0x05
    NACK = 0x06


class SensorType(IntEnum):
    """The six plug-and-play device families."""

    TEMP_HUMIDITY = 0x01
    LIGHT_UV = 0x02
    VOC = 0x03
    CONDUCTANCE = 0x04
    BODY_TEMP = 0x05
    HEART_RATE = 0x06

    @property
    def channel_count(self) -> int:
        # Temp+humidity and light+UV boards carry two sensing channels.
        return 2 if self in (SensorType.TEMP_HUMIDITY, SensorType.LIGHT_UV) else 1

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire_name(cls, name: str) -> "SensorType":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown sensor type name: {name!r}") from None


class Unit(IntEnum):
    CELSIUS = 0x01
    PERCENT_RH = 0x02
    LUX = 0x03
    UV_INDEX = 0x04
    PPB = 0x05
    MICROSIEMENS = 0x06
    BPM = 0x07
    RAW_COUNTS = 0x08

    @property
    def label(self) -> str:
        return _UNIT_LABELS[self]


_UNIT_LABELS = {
    Unit.CELSIUS: "degC",
    Unit.PERCENT_RH: "%RH",
    Unit.LUX: "lux",
    Unit.UV_INDEX: "UV index",
    Unit.PPB: "ppb",
    Unit.MICROSIEMENS: "uS",
    Unit.BPM: "bpm",
    Unit.RAW_COUNTS: "counts",
}


class FrameError(Exception):
    """Base class for all wire protocol failures."""


class OversizeError(FrameError):
    """Payload exceeds the 64-byte frame limit."""


class ChecksumError(FrameError):
    """Frame CRC mismatch; the frame must be discarded.

    ``resume_offset`` points just past the sync pair of the bad frame so a
    stream reader can rescan from there.
    """

    def __init__(self, expected: int, actual: int, resume_offset: int):
        super().__init__(
            f"CRC mismatch: frame says 0x{expected:04X}, computed 0x{actual:04X}"
        )
        self.expected = expected
        self.actual = actual
        self.resume_offset = resume_offset


class ProtocolError(FrameError):
    """Structurally invalid frame (bad version, type, or extent)."""

    def __init__(self, message: str, offending_byte: int | None = None,
                 resume_offset: int = 0):
        if offending_byte is not None:
            message = f"{message} (byte 0x{offending_byte:02X})"
        super().__init__(message)
        self.offending_byte = offending_byte
        self.resume_offset = resume_offset


class NoSyncError(ProtocolError):
    """No sync pair found in the given data."""


class TruncatedFrameError(ProtocolError):
    """A frame header was found but the data ends before the frame does."""


# -- CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection) -------------

def _build_crc_table() -> tuple[int, ...]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021) if crc & 0x8000 else (crc << 1)
        table.append(crc & 0xFFFF)
    return tuple(table)


_CRC_TABLE = _build_crc_table()


def crc16(data: bytes | bytearray | memoryview) -> int:
    """CRC-16/CCITT-FALSE of *data* (check value of b"123456789" is 0x29B1)."""
    crc = 0xFFFF
    for b in bytes(data):
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[((crc >> 8) ^ b) & 0xFF]
    return crc


# -- Fixed-point helpers -------------------------------------------------------

_I32_MIN = -(2**31)
_I32_MAX = 2**31 - 1


def to_fixed(value: float, scale: int = 100) -> int:
    """Quantize an engineering value to wire fixed point (signed 32-bit)."""
    raw = round(value * scale)
    if not _I32_MIN <= raw <= _I32_MAX:
        raise OversizeError(f"value {value} does not fit signed 32-bit x{scale}")
    return raw


def from_fixed(raw: int, scale: int = 100) -> float:
    return raw / scale


# -- Domain types --------------------------------------------------------------

@dataclass(frozen=True)
class ChannelSpec:
    """One measurement channel: unit and the valid engineering range."""

    unit: Unit
    range_min: float
    range_max: float

    def __post_init__(self):
        if not self.range_min < self.range_max:
            raise ValueError(
                f"range_min must be < range_max, got [{self.range_min}, {self.range_max}]"
            )

    def contains(self, value: float) -> bool:
        return self.range_min <= value <= self.range_max


@dataclass(frozen=True)
class CalibrationRecord:
    """Host-side linear correction for the analog body-temperature channel.

    ``gain`` is degC per raw count, ``offset`` degC.  Output of a correct
    calibration always lands in the device's physical window, 25..45 degC.
    """

    gain: float
    offset: float

    OUTPUT_MIN = 25.0
    OUTPUT_MAX = 45.0

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError(f"calibration gain must be > 0, got {self.gain}")

    def check_against_range(self, channel: ChannelSpec) -> None:
        """Raise if any in-range raw count maps outside 25..45 degC."""
        for raw in (channel.range_min, channel.range_max):
            out = self.gain * raw + self.offset
            if not (self.OUTPUT_MIN <= round(out, 2) <= self.OUTPUT_MAX):
                raise ValueError(
                    f"calibration maps raw {raw} to {out:.2f} degC, outside "
                    f"{self.OUTPUT_MIN}..{self.OUTPUT_MAX}"
                )


class CalibrationRangeError(ValueError):
    """Calibrated temperature fell outside the 25..45 degC physical window."""


def apply_calibration(raw: float, cal: CalibrationRecord) -> float:
    """Convert a raw ADC count to degC: gain * raw + offset, to 0.01 degC.

    Raises CalibrationRangeError when the result leaves the physical window,
    which signals a mis-calibrated device rather than a plausible reading.
    """
    value = round(cal.gain * raw + cal.offset, 2)
    if not (CalibrationRecord.OUTPUT_MIN <= value <= CalibrationRecord.OUTPUT_MAX):
        raise CalibrationRangeError(
            f"calibrated value {value:.2f} degC outside "
            f"{CalibrationRecord.OUTPUT_MIN}..{CalibrationRecord.OUTPUT_MAX}"
        )
    return value


# Default channel layout per sensor family.  Ranges are engineering units
# except body temperature, which exposes raw ADC counts for host calibration.
DEFAULT_CHANNELS: dict[SensorType, tuple[ChannelSpec, ...]] = {
    SensorType.TEMP_HUMIDITY: (
        ChannelSpec(Unit.CELSIUS, -20.0, 60.0),
        ChannelSpec(Unit.PERCENT_RH, 0.0, 100.0),
    ),
    SensorType.LIGHT_UV: (
        ChannelSpec(Unit.LUX, 0.0, 100000.0),
        ChannelSpec(Unit.UV_INDEX, 0.0, 12.0),
    ),
    SensorType.VOC: (ChannelSpec(Unit.PPB, 0.0, 60000.0),),
    SensorType.CONDUCTANCE: (ChannelSpec(Unit.MICROSIEMENS, 0.0, 2000.0),),
    SensorType.BODY_TEMP: (ChannelSpec(Unit.RAW_COUNTS, 500.0, 2500.0),),
    SensorType.HEART_RATE: (ChannelSpec(Unit.BPM, 30.0, 220.0),),
}


@dataclass(frozen=True)
class SensorDescriptor:
    """Identity and channel layout reported by a device during handshake."""

    sensor_type: SensorType
    serial_number: int
    firmware: tuple[int, int] = (1, 0)
    channels: tuple[ChannelSpec, ...] = ()
    calibration: CalibrationRecord | None = None

    def __post_init__(self):
        if not self.channels:
            object.__setattr__(self, "channels", DEFAULT_CHANNELS[self.sensor_type])
        if len(self.channels) != self.sensor_type.channel_count:
            raise ValueError(
                f"{self.sensor_type.wire_name} declares "
                f"{self.sensor_type.channel_count} channels, got {len(self.channels)}"
            )
        if not 0 <= self.serial_number <= 0xFFFFFFFF:
            raise ValueError(f"serial_number out of u32 range: {self.serial_number}")
        has_cal = self.calibration is not None
        if has_cal != (self.sensor_type is SensorType.BODY_TEMP):
            raise ValueError("calibration present iff sensor is body_temp")
        if self.sensor_type is SensorType.BODY_TEMP:
            if self.channels[0].unit is not Unit.RAW_COUNTS:
                raise ValueError("body_temp channel must report raw counts")
            assert self.calibration is not None
            self.calibration.check_against_range(self.channels[0])


@dataclass(frozen=True)
class Measurement:
    """One sample from a device: per-channel values at a stream-relative time."""

    sensor_type: SensorType
    timestamp_ms: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != self.sensor_type.channel_count:
            raise ValueError(
                f"{self.sensor_type.wire_name} measurement needs "
                f"{self.sensor_type.channel_count} values, got {len(self.values)}"
            )
        if not 0 <= self.timestamp_ms <= 0xFFFFFFFF:
            raise ValueError(f"timestamp_ms out of u32 range: {self.timestamp_ms}")

    def check_in_range(self, descriptor: SensorDescriptor) -> None:
        for value, channel in zip(self.values, descriptor.channels):
            if not channel.contains(value):
                raise ProtocolError(
                    f"value {value} outside channel range "
                    f"[{channel.range_min}, {channel.range_max}]"
                )


@dataclass(frozen=True)
class Frame:
    """One unit of the wire protocol, sync and CRC implicit."""

    frame_type: FrameType
    payload: bytes = b""
    version: int = PROTOCOL_VERSION

    def __post_init__(self):
        if len(self.payload) > MAX_PAYLOAD:
            raise OversizeError(
                f"payload is {len(self.payload)} bytes, limit {MAX_PAYLOAD}"
            )


# -- Frame encode / decode -----------------------------------------------------

def encode_frame(frame: Frame) -> bytes:
    """Serialize a frame; the CRC is computed here over version..payload."""
    if len(frame.payload) > MAX_PAYLOAD:
        raise OversizeError(
            f"payload is {len(frame.payload)} bytes, limit {MAX_PAYLOAD}"
        )
    body = bytes([frame.version, frame.frame_type, len(frame.payload)]) + frame.payload
    return SYNC + body + struct.pack(">H", crc16(body))


def decode_frame(data: bytes | bytearray, start: int = 0) -> tuple[Frame, int]:
    """Decode the first frame found at or after *start*.

    Scans forward to the next sync pair, so a garbage prefix is skipped.
    Returns the frame and the total number of bytes consumed (garbage
    included).  This is the closed-capture decoder: data that ends mid-frame
    raises TruncatedFrameError.  Incremental readers should use
    :class:`StreamDecoder`, which treats a trailing partial frame as
    "wait for more bytes".

    Raises:
        NoSyncError: no sync pair anywhere in the data.
        TruncatedFrameError: sync found but the frame runs past the end.
        ProtocolError: payload length, version, or frame type invalid.
        ChecksumError: CRC mismatch (frame must be discarded).
    """
    buf = bytes(data)
    i = buf.find(SYNC, start)
    if i < 0:
        raise NoSyncError("no sync marker found in data", resume_offset=len(buf))
    if len(buf) < i + 5:
        raise TruncatedFrameError(
            "frame header extends past end of data", resume_offset=i
        )
    version = buf[i + 2]
    frame_type_byte = buf[i + 3]
    payload_len = buf[i + 4]
    if payload_len > MAX_PAYLOAD:
        raise ProtocolError(
            "payload length exceeds 64", offending_byte=payload_len,
            resume_offset=i + 2,
        )
    end = i + FRAME_OVERHEAD + payload_len
    if len(buf) < end:
        raise TruncatedFrameError("frame extends past end of data", resume_offset=i)
    body = buf[i + 2 : end - 2]
    (stated_crc,) = struct.unpack(">H", buf[end - 2 : end])
    actual = crc16(body)
    if stated_crc != actual:
        raise ChecksumError(stated_crc, actual, resume_offset=i + 2)
    if version != PROTOCOL_VERSION:
        raise ProtocolError(
            "unsupported protocol version", offending_byte=version,
            resume_offset=i + 2,
        )
    try:
        frame_type = FrameType(frame_type_byte)
    except ValueError:
        raise ProtocolError(
            "unknown frame type", offending_byte=frame_type_byte,
            resume_offset=i + 2,
        ) from None
    return Frame(frame_type, buf[i + 5 : end - 2], version), end


# -- Payload codecs ------------------------------------------------------------

def encode_descriptor_payload(desc: SensorDescriptor) -> bytes:
    out = struct.pack(
        ">BIBBB",
        desc.sensor_type,
        desc.serial_number,
        desc.firmware[0],
        desc.firmware[1],
        len(desc.channels),
    )
    for ch in desc.channels:
        out += struct.pack(
            ">Bii", ch.unit, to_fixed(ch.range_min), to_fixed(ch.range_max)
        )
    if desc.calibration is not None:
        out += struct.pack(
            ">Bii",
            1,
            to_fixed(desc.calibration.gain, 10**6),
            to_fixed(desc.calibration.offset),
        )
    else:
        out += b"\x00"
    return out


def decode_descriptor_payload(payload: bytes) -> SensorDescriptor:
    try:
        type_byte, serial, fw_major, fw_minor, n_channels = struct.unpack_from(
            ">BIBBB", payload
        )
        offset = 8
        channels = []
        for _ in range(n_channels):
            unit_byte, lo, hi = struct.unpack_from(">Bii", payload, offset)
            channels.append(ChannelSpec(Unit(unit_byte), from_fixed(lo), from_fixed(hi)))
            offset += 9
        (has_cal,) = struct.unpack_from(">B", payload, offset)
        offset += 1
        calibration = None
        if has_cal:
            gain_raw, offset_raw = struct.unpack_from(">ii", payload, offset)
            offset += 8
            calibration = CalibrationRecord(
                from_fixed(gain_raw, 10**6), from_fixed(offset_raw)
            )
        if offset != len(payload):
            raise ValueError(f"{len(payload) - offset} trailing bytes")
        return SensorDescriptor(
            SensorType(type_byte), serial, (fw_major, fw_minor),
            tuple(channels), calibration,
        )
    except (struct.error, ValueError) as exc:
        raise ProtocolError(f"malformed descriptor payload: {exc}") from exc


DEFAULT_PERIOD_MS = 200


def encode_start_payload(period_ms: int = DEFAULT_PERIOD_MS) -> bytes:
    if not 1 <= period_ms <= 0xFFFF:
        raise ValueError(f"period_ms must be 1..65535, got {period_ms}")
    return struct.pack(">H", period_ms)


def decode_start_payload(payload: bytes) -> int:
    if len(payload) != 2:
        raise ProtocolError(f"START payload must be 2 bytes, got {len(payload)}")
    (period_ms,) = struct.unpack(">H", payload)
    if period_ms == 0:
        raise ProtocolError("START period must be nonzero")
    return period_ms


def encode_data_payload(serial_number: int, measurement: Measurement) -> bytes:
    out = struct.pack(
        ">BII", measurement.sensor_type, serial_number, measurement.timestamp_ms
    )
    for value in measurement.values:
        out += struct.pack(">i", to_fixed(value))
    return out


def decode_data_payload(payload: bytes) -> tuple[int, Measurement]:
    """Returns (device serial, measurement)."""
    try:
        type_byte, serial, timestamp_ms = struct.unpack_from(">BII", payload)
        sensor_type = SensorType(type_byte)
        expected = 9 + 4 * sensor_type.channel_count
        if len(payload) != expected:
            raise ValueError(
                f"DATA payload for {sensor_type.wire_name} must be "
                f"{expected} bytes, got {len(payload)}"
            )
        values = tuple(
            from_fixed(struct.unpack_from(">i", payload, 9 + 4 * i)[0])
            for i in range(sensor_type.channel_count)
        )
        return serial, Measurement(sensor_type, timestamp_ms, values)
    except (struct.error, ValueError) as exc:
        raise ProtocolError(f"malformed DATA payload: {exc}") from exc


class NackReason(IntEnum):
    BAD_CRC = 0x01
    UNSUPPORTED = 0x02
    BUSY = 0x03


def encode_nack_payload(reason: NackReason) -> bytes:
    return bytes([reason])


def decode_nack_payload(payload: bytes) -> NackReason:
    if len(payload) != 1:
        raise ProtocolError(f"NACK payload must be 1 byte, got {len(payload)}")
    try:
        return NackReason(payload[0])
    except ValueError:
        raise ProtocolError("unknown NACK reason", offending_byte=payload[0]) from None
