"""Network-facing service: persistence, HTTP API, device gateway."""

from .app import create_app
from .db import (
    DEFAULT_TOKEN_TTL,
    DISCOVER_PAGE_SIZE,
    MAX_PHOTO_BYTES,
    DiscoverPage,
    PhotoBlob,
    PlatformDB,
    SessionToken,
)
from .gateway import DeviceGateway, GatewayError, UnknownDeviceError

__all__ = [
    "DEFAULT_TOKEN_TTL",
    "DISCOVER_PAGE_SIZE",
    "MAX_PHOTO_BYTES",
    "DeviceGateway",
    "DiscoverPage",
    "GatewayError",
    "PhotoBlob",
    "PlatformDB",
    "SessionToken",
    "UnknownDeviceError",
    "create_app",
]
