"""Virtual device behavior: handshake, streaming, determinism, faults, farms."""

from __future__ import annotations

import time

import pytest

from senselab.devices import (
    DeviceConfig,
    Fault,
    SignalMode,
    SignalModel,
    VirtualDevice,
    body_temp_calibration,
    make_device_config,
    spawn_class_kit,
)
from senselab.protocol import (
    DeviceAbsentError,
    HostSession,
    ReadTimeout,
    SensorType,
    apply_calibration,
)


def run_device(config: DeviceConfig) -> VirtualDevice:
    device = VirtualDevice(config)
    device.start()
    return device


def constant_heart_rate(serial=0x60001, time_scale=0.02) -> DeviceConfig:
    return DeviceConfig(
        sensor_type=SensorType.HEART_RATE,
        serial_number=serial,
        signal=SignalModel((72.0,), (0.0,), SignalMode.CONSTANT),
        time_scale=time_scale,
    )


def collect(session: HostSession, n: int, timeout=5.0):
    out = []
    for _ in range(n):
        out.append(session.read_measurement(timeout=timeout))
    return out


def test_handshake_returns_configured_descriptor():
    device = run_device(constant_heart_rate())
    try:
        with HostSession(device.address) as session:
            desc = session.handshake()
            assert desc.sensor_type is SensorType.HEART_RATE
            assert desc.serial_number == 0x60001
            assert len(desc.channels) == 1
            assert desc.channels[0].unit.label == "bpm"
    finally:
        device.stop()


def test_handshake_all_sensor_types_within_timeout():
    for sensor_type in SensorType:
        config = make_device_config(sensor_type, (sensor_type.value << 16) | 1, seed=3)
        device = run_device(config)
        try:
            started = time.monotonic()
            with HostSession(device.address) as session:
                desc = session.handshake()
            elapsed = time.monotonic() - started
            assert elapsed < 0.5
            assert desc.sensor_type is sensor_type
            assert len(desc.channels) == sensor_type.channel_count
            assert (desc.calibration is not None) == (
                sensor_type is SensorType.BODY_TEMP
            )
        finally:
            device.stop()


def test_no_device_is_absent_error():
    import socket

    # A listener that accepts but never answers: handshake must time out.
    silent = socket.socket()
    silent.bind(("127.0.0.1", 0))
    silent.listen(1)
    try:
        session = HostSession(silent.getsockname(), handshake_timeout=0.5)
        started = time.monotonic()
        with pytest.raises(DeviceAbsentError):
            session.handshake()
        assert 0.4 <= time.monotonic() - started < 1.5
        session.close()
    finally:
        silent.close()


def test_connection_refused_is_absent_error():
    import socket

    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    free_address = probe.getsockname()
    probe.close()
    with pytest.raises(DeviceAbsentError):
        HostSession(free_address)


def test_constant_device_streams_constant_values():
    device = run_device(constant_heart_rate())
    try:
        with HostSession(device.address) as session:
            session.handshake()
            session.start_stream(200)
            samples = collect(session, 10)
            assert all(m.values == (72.0,) for _, m in samples)
            assert all(serial == 0x60001 for serial, _ in samples)
            # Timestamps advance by the simulated period regardless of pacing.
            stamps = [m.timestamp_ms for _, m in samples]
            assert stamps == [i * 200 for i in range(10)]
    finally:
        device.stop()


def test_sinusoid_stays_within_bounds():
    config = DeviceConfig(
        sensor_type=SensorType.TEMP_HUMIDITY,
        serial_number=0x10001,
        signal=SignalModel((22.0, 45.0), (3.0, 8.0), SignalMode.SINUSOID_DRIFT),
        jitter_seed=42,
        time_scale=0.01,
    )
    device = run_device(config)
    try:
        with HostSession(device.address) as session:
            session.handshake()
            session.start_stream(200)
            for _, m in collect(session, 30):
                assert 19.0 <= m.values[0] <= 25.0
                assert 37.0 <= m.values[1] <= 53.0
    finally:
        device.stop()


def test_same_seed_gives_identical_sequences():
    def run_once():
        config = DeviceConfig(
            sensor_type=SensorType.HEART_RATE,
            serial_number=0x60002,
            signal=SignalModel((72.0,), (18.0,), SignalMode.SINUSOID_DRIFT),
            jitter_seed=777,
            time_scale=0.01,
        )
        device = run_device(config)
        try:
            with HostSession(device.address) as session:
                session.handshake()
                session.start_stream(100)
                return [m.values for _, m in collect(session, 20)]
        finally:
            device.stop()

    assert run_once() == run_once()


def test_step_response_moves_after_step():
    config = DeviceConfig(
        sensor_type=SensorType.CONDUCTANCE,
        serial_number=0x40001,
        signal=SignalModel(
            (700.0,), (150.0,), SignalMode.STEP_RESPONSE, step_at_s=1.0, step_tau_s=0.5
        ),
        jitter_seed=5,
        time_scale=0.005,
    )
    device = run_device(config)
    try:
        with HostSession(device.address) as session:
            session.handshake()
            session.start_stream(200)
            samples = [m for _, m in collect(session, 40)]
            early = [m.values[0] for m in samples if m.timestamp_ms < 1000]
            late = [m.values[0] for m in samples if m.timestamp_ms > 4000]
            assert max(early) < min(late)
            assert all(550.0 <= m.values[0] <= 850.0 for m in samples)
    finally:
        device.stop()


def test_body_temp_calibrates_into_physical_window():
    config = make_device_config(SensorType.BODY_TEMP, 0x50001, seed=11, time_scale=0.01)
    device = run_device(config)
    try:
        with HostSession(device.address) as session:
            desc = session.handshake()
            session.start_stream(100)
            for _, m in collect(session, 20):
                celsius = apply_calibration(m.values[0], desc.calibration)
                assert 25.0 <= celsius <= 45.0
    finally:
        device.stop()


def test_mute_fault_stops_data():
    device = run_device(constant_heart_rate())
    try:
        with HostSession(device.address) as session:
            session.handshake()
            session.start_stream(100)
            collect(session, 2)
            device.inject_fault(Fault.MUTE)
            time.sleep(0.05)  # drain frames already in flight
            with pytest.raises(ReadTimeout):
                collect(session, 50, timeout=0.5)
    finally:
        device.stop()


def test_corrupt_crc_fault_yields_zero_accepted_measurements():
    device = run_device(constant_heart_rate())
    device.inject_fault(Fault.CORRUPT_CRC)
    try:
        with HostSession(device.address) as session:
            with pytest.raises(DeviceAbsentError):
                session.handshake()  # IDENT_RESP is corrupted too
        # One session per device: reconnect after the first one closes.
        time.sleep(0.15)
        with HostSession(device.address) as session:
            session.start_stream(100)
            with pytest.raises(ReadTimeout):
                session.read_measurement(timeout=0.6)
            assert session.stats.checksum_errors > 0
            assert session.stats.frames_ok == 0
    finally:
        device.stop()


def test_slow_fault_doubles_observed_period():
    device = run_device(constant_heart_rate(time_scale=1.0))
    try:
        with HostSession(device.address) as session:
            session.handshake()
            device.inject_fault(Fault.SLOW)
            session.start_stream(200)
            times = []
            for _ in range(4):
                session.read_measurement(timeout=3.0)
                times.append(time.monotonic())
            gaps = [b - a for a, b in zip(times, times[1:])]
            mean_gap = sum(gaps) / len(gaps)
            assert 0.3 <= mean_gap <= 0.55  # 400 ms nominal, scheduler tolerant
    finally:
        device.stop()


def test_class_kit_counts_and_unique_serials():
    with spawn_class_kit(1, seed=1, time_scale=0.05) as farm:
        assert len(farm) == 6
        types = {d.sensor_type for d in farm}
        assert types == set(SensorType)
    with spawn_class_kit(3, seed=1, time_scale=0.05) as farm:
        assert len(farm) == 18
        serials = [d.serial_number for d in farm]
        assert len(set(serials)) == 18


def test_body_temp_calibration_is_deterministic_and_valid():
    a = body_temp_calibration(9, 0x50005)
    b = body_temp_calibration(9, 0x50005)
    assert a == b
    assert a != body_temp_calibration(9, 0x50006)


def test_farm_error_lists_failed_devices(monkeypatch):
    import senselab.devices.farm as farm_mod
    from senselab.devices.farm import FarmError

    real_device = farm_mod.VirtualDevice

    class FlakyDevice(real_device):
        def __init__(self, config, host="127.0.0.1", port=0):
            if config.sensor_type is SensorType.VOC:
                raise farm_mod.BindError("address in use")
            super().__init__(config, host, port)

    monkeypatch.setattr(farm_mod, "VirtualDevice", FlakyDevice)
    with pytest.raises(FarmError) as excinfo:
        spawn_class_kit(2, seed=1, time_scale=0.05)
    assert len(excinfo.value.failures) == 2  # both voc units
    assert "voc" in str(excinfo.value)
