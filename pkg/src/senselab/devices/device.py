"""A protocol-conformant virtual sensor device behind a TCP endpoint.

Each device runs its own thread, accepts one host session at a time, answers
IDENT_REQ with its descriptor, and streams DATA frames after START at the
requested period.  ``time_scale`` compresses wall-clock pacing while DATA
timestamps keep counting simulated milliseconds, so long captures can run in
a fraction of real time.
"""

from __future__ import annotations

import select
import socket
import threading
import time
from dataclasses import dataclass
from enum import Enum

from senselab.protocol import (
    DEFAULT_CHANNELS,
    CalibrationRecord,
    ChannelSpec,
    Frame,
    FrameType,
    Measurement,
    NackReason,
    SensorDescriptor,
    SensorType,
    StreamDecoder,
    decode_start_payload,
    encode_data_payload,
    encode_descriptor_payload,
    encode_frame,
    encode_nack_payload,
)

from .signals import SignalMode, SignalModel

DEFAULT_SIGNALS: dict[SensorType, SignalModel] = {
    SensorType.TEMP_HUMIDITY: SignalModel((22.0, 45.0), (3.0, 8.0)),
    SensorType.LIGHT_UV: SignalModel((500.0, 3.0), (200.0, 1.5)),
    SensorType.VOC: SignalModel((150.0, ), (40.0, )),
    SensorType.CONDUCTANCE: SignalModel((700.0, ), (150.0, )),
    SensorType.BODY_TEMP: SignalModel((1700.0, ), (300.0, )),
    SensorType.HEART_RATE: SignalModel((72.0, ), (18.0, )),
}


class Fault(str, Enum):
    MUTE = "mute"  # stop emitting DATA
    CORRUPT_CRC = "corrupt_crc"  # flip one byte per emitted frame
    SLOW = "slow"  # double the streaming period


@dataclass(frozen=True)
class DeviceConfig:
    sensor_type: SensorType
    serial_number: int
    signal: SignalModel | None = None
    calibration: CalibrationRecord | None = None
    jitter_seed: int = 0
    firmware: tuple[int, int] = (1, 0)
    channels: tuple[ChannelSpec, ...] = ()
    time_scale: float = 1.0

    def __post_init__(self):
        if not self.channels:
            object.__setattr__(self, "channels", DEFAULT_CHANNELS[self.sensor_type])
        if self.signal is None:
            object.__setattr__(self, "signal", DEFAULT_SIGNALS[self.sensor_type])
        self.signal.check_against(self.channels)
        if self.time_scale <= 0:
            raise ValueError("time_scale must be > 0")
        # Descriptor construction enforces the calibration-iff-body-temp rule.
        self.descriptor()

    def descriptor(self) -> SensorDescriptor:
        return SensorDescriptor(
            self.sensor_type, self.serial_number, self.firmware,
            self.channels, self.calibration,
        )


class BindError(OSError):
    """The requested endpoint address could not be bound."""


class VirtualDevice:
    """One simulated sensor bound to a host:port endpoint."""

    def __init__(self, config: DeviceConfig, host: str = "127.0.0.1", port: int = 0):
        self.config = config
        self._faults: set[Fault] = set()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        try:
            self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self._listener.bind((host, port))
            self._listener.listen(1)
        except OSError as exc:
            raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
        self.address: tuple[str, int] = self._listener.getsockname()

    @property
    def serial_number(self) -> int:
        return self.config.serial_number

    @property
    def sensor_type(self) -> SensorType:
        return self.config.sensor_type

    def start(self) -> tuple[str, int]:
        self._thread = threading.Thread(
            target=self._serve, name=f"device-{self.serial_number:08x}", daemon=True
        )
        self._thread.start()
        return self.address

    def stop(self) -> None:
        self._stop.set()
        try:
            self._listener.close()
        except OSError:
            pass
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    def inject_fault(self, fault: Fault) -> None:
        self._faults.add(Fault(fault))

    def clear_faults(self) -> None:
        self._faults.clear()

    # -- internals -----------------------------------------------------------

    def _serve(self) -> None:
        while not self._stop.is_set():
            try:
                ready, _, _ = select.select([self._listener], [], [], 0.1)
            except (OSError, ValueError):
                return
            if not ready:
                continue
            try:
                conn, _ = self._listener.accept()
            except OSError:
                return
            with conn:
                self._session(conn)

    def _send_frame(self, conn: socket.socket, frame: Frame) -> None:
        raw = encode_frame(frame)
        if Fault.CORRUPT_CRC in self._faults:
            corrupted = bytearray(raw)
            corrupted[-1] ^= 0xFF  # one byte per frame, CRC low byte
            raw = bytes(corrupted)
        conn.sendall(raw)

    def _sample(self, sim_ms: int, index: int) -> Measurement:
        signal = self.config.signal
        values = tuple(
            signal.value(ch, sim_ms, index, self.config.jitter_seed)
            for ch in range(len(self.config.channels))
        )
        return Measurement(self.config.sensor_type, sim_ms, values)

    def _session(self, conn: socket.socket) -> None:
        decoder = StreamDecoder()
        streaming = False
        period_ms = 0
        sim_ms = 0
        index = 0
        next_due = 0.0
        descriptor_payload = encode_descriptor_payload(self.config.descriptor())

        while not self._stop.is_set():
            if streaming:
                timeout = max(0.0, next_due - time.monotonic())
            else:
                timeout = 0.1
            try:
                ready, _, _ = select.select([conn], [], [], min(timeout, 0.1))
            except (OSError, ValueError):
                return

            if ready:
                try:
                    data = conn.recv(4096)
                except OSError:
                    return
                if not data:
                    return  # host went away; session over
                errors_before = decoder.stats.checksum_errors
                frames = decoder.feed(data)
                if decoder.stats.checksum_errors > errors_before:
                    self._send_frame(
                        conn, Frame(FrameType.NACK, encode_nack_payload(NackReason.BAD_CRC))
                    )
                for frame in frames:
                    if frame.frame_type is FrameType.IDENT_REQ:
                        self._send_frame(
                            conn, Frame(FrameType.IDENT_RESP, descriptor_payload)
                        )
                    elif frame.frame_type is FrameType.START:
                        period_ms = decode_start_payload(frame.payload)
                        streaming = True
                        sim_ms = 0
                        index = 0
                        next_due = time.monotonic()
                    elif frame.frame_type is FrameType.STOP:
                        streaming = False
                    else:
                        self._send_frame(
                            conn,
                            Frame(FrameType.NACK,
                                  encode_nack_payload(NackReason.UNSUPPORTED)),
                        )

            if streaming and time.monotonic() >= next_due:
                effective_ms = period_ms * (2 if Fault.SLOW in self._faults else 1)
                if Fault.MUTE not in self._faults:
                    measurement = self._sample(sim_ms, index)
                    payload = encode_data_payload(self.serial_number, measurement)
                    try:
                        self._send_frame(conn, Frame(FrameType.DATA, payload))
                    except OSError:
                        return
                sim_ms += effective_ms
                index += 1
                next_due += effective_ms / 1000.0 * self.config.time_scale
