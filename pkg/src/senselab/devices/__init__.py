"""Virtual plug-and-play sensor devices and class-kit farms."""

from .device import BindError, DeviceConfig, Fault, VirtualDevice, DEFAULT_SIGNALS
from .farm import (
    DEFAULT_KIT_COUNT,
    DeviceFarm,
    FarmError,
    UnknownDeviceError,
    body_temp_calibration,
    make_device_config,
    spawn_class_kit,
)
from .signals import SignalMode, SignalModel, splitmix64

__all__ = [
    "DEFAULT_KIT_COUNT",
    "DEFAULT_SIGNALS",
    "BindError",
    "DeviceConfig",
    "DeviceFarm",
    "FarmError",
    "Fault",
    "SignalMode",
    "SignalModel",
    "UnknownDeviceError",
    "VirtualDevice",
    "body_temp_calibration",
    "make_device_config",
    "spawn_class_kit",
    "splitmix64",
]
