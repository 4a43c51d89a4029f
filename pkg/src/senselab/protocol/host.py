"""Host side of the sensor protocol: stream decoding and the device session."""

from __future__ import annotations

import socket
import time
from dataclasses import dataclass, field

from .codec import (
    DEFAULT_PERIOD_MS,
    SYNC,
    ChecksumError,
    Frame,
    FrameType,
    Measurement,
    NoSyncError,
    ProtocolError,
    SensorDescriptor,
    TruncatedFrameError,
    decode_data_payload,
    decode_descriptor_payload,
    decode_frame,
    encode_frame,
    encode_start_payload,
)


class DeviceAbsentError(Exception):
    """No device answered within the handshake timeout."""


class ReadTimeout(Exception):
    """No frame arrived within the requested window."""


@dataclass
class StreamStats:
    frames_ok: int = 0
    checksum_errors: int = 0
    protocol_errors: int = 0
    bytes_discarded: int = 0


class StreamDecoder:
    """Incremental frame extractor with resynchronization.

    Feed arbitrary byte chunks; complete valid frames come out in order.
    Corrupt frames are discarded (counted in ``stats``) and scanning resumes
    at the next sync pair, so garbage + frame + garbage yields exactly the
    frame.
    """

    def __init__(self):
        self._buf = bytearray()
        self.stats = StreamStats()

    def feed(self, data: bytes) -> list[Frame]:
        self._buf.extend(data)
        frames = []
        while True:
            frame = self._next_frame()
            if frame is None:
                return frames
            frames.append(frame)

    def _next_frame(self) -> Frame | None:
        while True:
            try:
                frame, consumed = decode_frame(self._buf)
            except TruncatedFrameError as err:
                # Partial frame at the tail: drop the garbage prefix, wait.
                self.stats.bytes_discarded += err.resume_offset
                del self._buf[: err.resume_offset]
                return None
            except NoSyncError:
                # Keep a trailing 0xAA in case its 0x55 is still in flight.
                keep = 1 if self._buf.endswith(SYNC[:1]) else 0
                self.stats.bytes_discarded += len(self._buf) - keep
                del self._buf[: len(self._buf) - keep]
                return None
            except ChecksumError as err:
                self.stats.checksum_errors += 1
                self.stats.bytes_discarded += err.resume_offset
                del self._buf[: err.resume_offset]
                continue
            except ProtocolError as err:
                self.stats.protocol_errors += 1
                skip = max(err.resume_offset, 1)
                self.stats.bytes_discarded += skip
                del self._buf[:skip]
                continue
            self.stats.frames_ok += 1
            del self._buf[:consumed]
            return frame


DEFAULT_HANDSHAKE_TIMEOUT = 0.5


class HostSession:
    """Exclusive host-side session with one device over a byte stream.

    Owns the socket; one session per device.  Not thread-safe: run each
    session on its own thread.
    """

    def __init__(self, address: tuple[str, int], *,
                 handshake_timeout: float = DEFAULT_HANDSHAKE_TIMEOUT):
        self.address = address
        self.handshake_timeout = handshake_timeout
        self.descriptor: SensorDescriptor | None = None
        self._decoder = StreamDecoder()
        self._pending: list[Frame] = []
        try:
            self._sock = socket.create_connection(address, timeout=handshake_timeout)
        except OSError as exc:
            raise DeviceAbsentError(f"cannot connect to {address}: {exc}") from exc

    @property
    def stats(self) -> StreamStats:
        return self._decoder.stats

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    def __enter__(self) -> "HostSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- frame plumbing ----------------------------------------------------

    def _send(self, frame: Frame) -> None:
        self._sock.sendall(encode_frame(frame))

    def _read_frame(self, timeout: float) -> Frame:
        """Next frame from the stream, waiting at most *timeout* seconds."""
        deadline = time.monotonic() + timeout
        while True:
            if self._pending:
                return self._pending.pop(0)
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ReadTimeout(f"no frame within {timeout:.3f}s")
            self._sock.settimeout(remaining)
            try:
                chunk = self._sock.recv(4096)
            except socket.timeout:
                raise ReadTimeout(f"no frame within {timeout:.3f}s") from None
            if not chunk:
                raise ReadTimeout("stream closed by device")
            self._pending.extend(self._decoder.feed(chunk))

    # -- protocol operations -------------------------------------------------

    def handshake(self) -> SensorDescriptor:
        """IDENT_REQ -> IDENT_RESP; returns the device's descriptor."""
        self._send(Frame(FrameType.IDENT_REQ))
        deadline = time.monotonic() + self.handshake_timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise DeviceAbsentError(
                    f"no IDENT_RESP within {self.handshake_timeout * 1000:.0f} ms"
                )
            try:
                frame = self._read_frame(remaining)
            except ReadTimeout:
                raise DeviceAbsentError(
                    f"no IDENT_RESP within {self.handshake_timeout * 1000:.0f} ms"
                ) from None
            if frame.frame_type is FrameType.IDENT_RESP:
                self.descriptor = decode_descriptor_payload(frame.payload)
                return self.descriptor
            # Anything else (stale DATA from a previous session) is skipped.

    def start_stream(self, period_ms: int = DEFAULT_PERIOD_MS) -> None:
        self._send(Frame(FrameType.START, encode_start_payload(period_ms)))

    def stop_stream(self) -> None:
        self._send(Frame(FrameType.STOP))

    def read_measurement(self, timeout: float = 2.0) -> tuple[int, Measurement]:
        """Next DATA frame as (device serial, measurement).

        Values are range-checked against the handshaken descriptor when one
        is present.
        """
        deadline = time.monotonic() + timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ReadTimeout(f"no DATA frame within {timeout:.3f}s")
            frame = self._read_frame(remaining)
            if frame.frame_type is not FrameType.DATA:
                continue
            serial, measurement = decode_data_payload(frame.payload)
            if self.descriptor is not None:
                measurement.check_in_range(self.descriptor)
            return serial, measurement
