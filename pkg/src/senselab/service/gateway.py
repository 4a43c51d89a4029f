"""Device gateway: one host session per device, fanned out to subscribers.

The browser never touches the byte stream; it subscribes here and receives
structured measurement records.  Each subscriber owns a bounded buffer, and
a slow consumer loses its oldest records rather than stalling the device
session or its peers.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

from senselab.devices import DeviceFarm, Fault
from senselab.protocol import (
    DeviceAbsentError,
    FrameError,
    HostSession,
    ReadTimeout,
    SensorDescriptor,
)

SUBSCRIBER_BUFFER = 256
STREAM_END = None  # sentinel pushed after an error record


class GatewayError(Exception):
    pass


class UnknownDeviceError(GatewayError):
    pass


class _Subscriber:
    """Bounded record buffer; appends never block (oldest records drop)."""

    def __init__(self, maxlen: int = SUBSCRIBER_BUFFER):
        self._buf: deque = deque(maxlen=maxlen)
        self._cond = threading.Condition()
        self.closed = False

    def push(self, record) -> None:
        with self._cond:
            self._buf.append(record)
            self._cond.notify()

    def pop(self, timeout: float = 5.0):
        """Next record, STREAM_END at end of stream, or raises on timeout."""
        with self._cond:
            while not self._buf:
                if self.closed:
                    return STREAM_END
                if not self._cond.wait(timeout):
                    raise TimeoutError("no record within timeout")
            return self._buf.popleft()

    def close(self) -> None:
        with self._cond:
            self.closed = True
            self._cond.notify_all()


class _DeviceReader:
    """Owns the single host session for one device; fans records out."""

    def __init__(self, address: tuple[str, int], serial: int, period_ms: int):
        self.address = address
        self.serial = serial
        self.period_ms = period_ms
        self.subscribers: list[_Subscriber] = []
        self.descriptor: SensorDescriptor | None = None
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._thread = threading.Thread(
            target=self._run, name=f"gateway-{serial:08x}", daemon=True
        )

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        self._thread.join(timeout=3.0)

    def add(self, subscriber: _Subscriber) -> None:
        with self._lock:
            self.subscribers.append(subscriber)

    def remove(self, subscriber: _Subscriber) -> bool:
        """Drop a subscriber; True when the reader is now idle."""
        with self._lock:
            if subscriber in self.subscribers:
                self.subscribers.remove(subscriber)
            return not self.subscribers

    def _broadcast(self, record) -> None:
        with self._lock:
            targets = list(self.subscribers)
        for subscriber in targets:
            subscriber.push(record)

    def _finish(self, error: str | None) -> None:
        if error is not None:
            self._broadcast({"error": error, "serial": self.serial})
        with self._lock:
            targets = list(self.subscribers)
        for subscriber in targets:
            subscriber.close()

    def _run(self) -> None:
        try:
            session = HostSession(self.address)
        except DeviceAbsentError as exc:
            self._finish(str(exc))
            return
        try:
            descriptor = session.handshake()
            self.descriptor = descriptor
            units = [ch.unit.label for ch in descriptor.channels]
            session.start_stream(self.period_ms)
            while not self._stop.is_set():
                try:
                    serial, measurement = session.read_measurement(timeout=2.0)
                except ReadTimeout:
                    self._finish("device stopped answering (timeout)")
                    return
                self._broadcast({
                    "serial": serial,
                    "sensor_type": measurement.sensor_type.wire_name,
                    "timestamp_ms": measurement.timestamp_ms,
                    "values": list(measurement.values),
                    "units": units,
                })
            self._finish(None)
        except (DeviceAbsentError, FrameError, OSError) as exc:
            self._finish(str(exc))
        finally:
            try:
                session.stop_stream()
            except OSError:
                pass
            session.close()


class DeviceGateway:
    """Registry over a running farm plus shared measurement streams."""

    def __init__(self, farm: DeviceFarm | None = None, period_ms: int = 200):
        self.farm = farm
        self.period_ms = period_ms
        self._readers: dict[int, _DeviceReader] = {}
        self._lock = threading.Lock()

    def list_devices(self) -> list[dict]:
        if self.farm is None:
            return []
        out = []
        for device in self.farm:
            descriptor = device.config.descriptor()
            out.append({
                "serial": device.serial_number,
                "sensor_type": device.sensor_type.wire_name,
                "address": f"{device.address[0]}:{device.address[1]}",
                "channels": [
                    {
                        "unit": ch.unit.label,
                        "range_min": ch.range_min,
                        "range_max": ch.range_max,
                    }
                    for ch in descriptor.channels
                ],
            })
        return sorted(out, key=lambda d: d["serial"])

    def _device_address(self, serial: int) -> tuple[str, int]:
        if self.farm is None:
            raise UnknownDeviceError("no device farm is running")
        try:
            return self.farm.get(serial).address
        except KeyError:
            raise UnknownDeviceError(f"no device with serial {serial}") from None

    def inject_fault(self, serial: int, fault: Fault | str) -> None:
        if self.farm is None:
            raise UnknownDeviceError("no device farm is running")
        try:
            self.farm.inject_fault(serial, Fault(fault))
        except KeyError:
            raise UnknownDeviceError(f"no device with serial {serial}") from None

    def subscribe(self, serial: int) -> _Subscriber:
        address = self._device_address(serial)
        subscriber = _Subscriber()
        with self._lock:
            reader = self._readers.get(serial)
            if reader is None or not reader._thread.is_alive():
                reader = _DeviceReader(address, serial, self.period_ms)
                self._readers[serial] = reader
                reader.add(subscriber)
                reader.start()
            else:
                reader.add(subscriber)
        return subscriber

    def unsubscribe(self, serial: int, subscriber: _Subscriber) -> None:
        with self._lock:
            reader = self._readers.get(serial)
        if reader is None:
            return
        if reader.remove(subscriber):
            reader.stop()
            with self._lock:
                if self._readers.get(serial) is reader:
                    del self._readers[serial]

    def shutdown(self) -> None:
        with self._lock:
            readers = list(self._readers.values())
            self._readers.clear()
        for reader in readers:
            reader.stop()
