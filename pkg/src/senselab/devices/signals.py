"""Deterministic signal models for simulated sensors.

Every emitted value is a pure function of (seed, channel, sample index,
timestamp), so a device replayed with the same config produces the identical
byte stream.  Jitter comes from SplitMix64 rather than a stateful RNG to keep
samples order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from senselab.protocol import ChannelSpec

_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


def _unit_noise(seed: int, channel: int, index: int) -> float:
    """Deterministic noise in [-1, 1) keyed on (seed, channel, index)."""
    h = splitmix64(splitmix64(seed & _M64 ^ ((channel + 1) << 56)) ^ (index & _M64))
    return h / float(1 << 63) - 1.0


class SignalMode(str, Enum):
    CONSTANT = "constant"
    SINUSOID_DRIFT = "sinusoid_drift"
    STEP_RESPONSE = "step_response"


@dataclass(frozen=True)
class SignalModel:
    """Per-channel baseline and bounded drift around it.

    ``baseline[ch] +/- amplitude[ch]`` must stay inside the channel range;
    every generated value respects that bound.  Constant mode emits the bare
    baseline so a zero-amplitude device is exactly flat.
    """

    baselines: tuple[float, ...]
    amplitudes: tuple[float, ...]
    mode: SignalMode = SignalMode.SINUSOID_DRIFT
    drift_period_s: float = 60.0
    step_at_s: float = 5.0
    step_tau_s: float = 3.0

    def __post_init__(self):
        if len(self.baselines) != len(self.amplitudes):
            raise ValueError("baselines and amplitudes must have equal length")
        if any(a < 0 for a in self.amplitudes):
            raise ValueError("amplitudes must be >= 0")

    def check_against(self, channels: tuple[ChannelSpec, ...]) -> None:
        if len(channels) != len(self.baselines):
            raise ValueError(
                f"signal has {len(self.baselines)} channels, device has {len(channels)}"
            )
        for base, amp, ch in zip(self.baselines, self.amplitudes, channels):
            if base - amp < ch.range_min or base + amp > ch.range_max:
                raise ValueError(
                    f"baseline {base} +/- {amp} leaves channel range "
                    f"[{ch.range_min}, {ch.range_max}]"
                )

    def value(self, channel: int, timestamp_ms: int, index: int, seed: int) -> float:
        base = self.baselines[channel]
        amp = self.amplitudes[channel]
        if self.mode is SignalMode.CONSTANT or amp == 0.0:
            return round(base, 2)
        t = timestamp_ms / 1000.0
        noise = _unit_noise(seed, channel, index)
        if self.mode is SignalMode.SINUSOID_DRIFT:
            phase = 2.0 * math.pi * (splitmix64(seed ^ channel) / float(1 << 64))
            drift = 0.8 * math.sin(2.0 * math.pi * t / self.drift_period_s + phase)
            raw = base + amp * (drift + 0.2 * noise)
        else:  # STEP_RESPONSE
            if t < self.step_at_s:
                raw = base + 0.1 * amp * noise
            else:
                rise = 1.0 - math.exp(-(t - self.step_at_s) / self.step_tau_s)
                raw = base + 0.88 * amp * rise + 0.1 * amp * noise
        return round(raw, 2)
