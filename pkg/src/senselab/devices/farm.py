"""Class-kit farms: many virtual devices running side by side."""

from __future__ import annotations

from senselab.protocol import CalibrationRecord, SensorType

from .device import BindError, DeviceConfig, Fault, VirtualDevice
from .signals import splitmix64

DEFAULT_KIT_COUNT = 20  # units of each sensor type in one class kit


class FarmError(Exception):
    """Farm startup failed; ``failures`` lists (config, error) pairs."""

    def __init__(self, failures: list[tuple[DeviceConfig, Exception]]):
        names = ", ".join(
            f"{cfg.sensor_type.wire_name}#{cfg.serial_number:08x}" for cfg, _ in failures
        )
        super().__init__(f"{len(failures)} device(s) failed to start: {names}")
        self.failures = failures


class UnknownDeviceError(KeyError):
    pass


def body_temp_calibration(seed: int, serial_number: int) -> CalibrationRecord:
    """Per-unit calibration, deterministic in (seed, serial).

    Gain lands in 0.0085..0.0095 degC/count and the offset pins raw 500 to
    25.2 degC, so the whole 500..2500 count range maps inside 25..45 degC.
    """
    u = splitmix64(seed ^ (serial_number * 0x9E3779B1)) / float(1 << 64)
    gain = round(0.0085 + 0.001 * u, 6)
    offset = round(25.2 - 500.0 * gain, 2)
    return CalibrationRecord(gain=gain, offset=offset)


def make_device_config(
    sensor_type: SensorType,
    serial_number: int,
    *,
    seed: int = 0,
    time_scale: float = 1.0,
) -> DeviceConfig:
    calibration = None
    if sensor_type is SensorType.BODY_TEMP:
        calibration = body_temp_calibration(seed, serial_number)
    return DeviceConfig(
        sensor_type=sensor_type,
        serial_number=serial_number,
        calibration=calibration,
        jitter_seed=splitmix64(seed ^ serial_number),
        time_scale=time_scale,
    )


class DeviceFarm:
    """A set of running virtual devices with unique serials and endpoints."""

    def __init__(self, devices: list[VirtualDevice]):
        self.devices = {d.serial_number: d for d in devices}
        if len(self.devices) != len(devices):
            raise ValueError("duplicate serial numbers in farm")

    def __len__(self) -> int:
        return len(self.devices)

    def __iter__(self):
        return iter(self.devices.values())

    def addresses(self) -> list[tuple[str, int]]:
        return [d.address for d in self.devices.values()]

    def get(self, serial_number: int) -> VirtualDevice:
        try:
            return self.devices[serial_number]
        except KeyError:
            raise UnknownDeviceError(f"no device with serial {serial_number}") from None

    def by_sensor_type(self, sensor_type: SensorType) -> list[VirtualDevice]:
        return [d for d in self.devices.values() if d.sensor_type is sensor_type]

    def inject_fault(self, serial_number: int, fault: Fault) -> None:
        self.get(serial_number).inject_fault(fault)

    def stop(self) -> None:
        for device in self.devices.values():
            device.stop()

    def __enter__(self) -> "DeviceFarm":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


def spawn_class_kit(
    count_per_type: int = DEFAULT_KIT_COUNT,
    *,
    seed: int = 0,
    time_scale: float = 1.0,
    host: str = "127.0.0.1",
) -> DeviceFarm:
    """Start a full kit: ``count_per_type`` devices of each of the six types.

    Serials are unique across the farm (sensor code in the high half).  If
    any device fails to bind or start, everything already started is torn
    down and a FarmError lists the failures.
    """
    if count_per_type < 1:
        raise ValueError("count_per_type must be >= 1")
    started: list[VirtualDevice] = []
    failures: list[tuple[DeviceConfig, Exception]] = []
    for sensor_type in SensorType:
        for n in range(count_per_type):
            serial = (sensor_type.value << 16) | (n + 1)
            config = make_device_config(
                sensor_type, serial, seed=seed, time_scale=time_scale
            )
            try:
                device = VirtualDevice(config, host=host)
                device.start()
                started.append(device)
            except (BindError, OSError) as exc:
                failures.append((config, exc))
    if failures:
        for device in started:
            device.stop()
        raise FarmError(failures)
    return DeviceFarm(started)
