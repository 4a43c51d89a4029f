import { describe, expect, it } from 'vitest';

import { LiveReadingView, WINDOW_SIZE } from '../src/live.js';
import type { DeviceWire, StreamRecord } from '../src/types.js';

const DEVICE: DeviceWire = {
  serial: 0x60001,
  sensor_type: 'heart_rate',
  address: '127.0.0.1:4000',
  channels: [{ unit: 'bpm', range_min: 30, range_max: 220 }],
};

function record(t: number, value: number): StreamRecord {
  return {
    serial: DEVICE.serial, sensor_type: 'heart_rate',
    timestamp_ms: t, values: [value], units: ['bpm'],
  };
}

describe('LiveReadingView', () => {
  it('keeps a bounded rolling window', () => {
    const live = new LiveReadingView(DEVICE);
    for (let i = 0; i < WINDOW_SIZE + 50; i++) {
      live.push(record(i * 200, 60 + (i % 10)));
    }
    expect(live.traces[0]!.values.length).toBe(WINDOW_SIZE);
    expect(live.samples).toBe(WINDOW_SIZE + 50);
    // Oldest samples were dropped: the window starts 50 pushes in.
    expect(live.traces[0]!.values[0]).toBe(60 + (50 % 10));
  });

  it('renders readout with unit labels from the stream', () => {
    const live = new LiveReadingView(DEVICE);
    live.push(record(0, 72));
    expect(live.readout()).toEqual([{ value: 72, unit: 'bpm' }]);
    expect(live.descriptorSummary).toContain('heart_rate');
    expect(live.descriptorSummary).toContain('bpm');
  });

  it('marks a visible disconnected state on device error', () => {
    const live = new LiveReadingView(DEVICE);
    live.setState('live');
    live.setError('checksum storm');
    expect(live.state).toBe('disconnected');
    expect(live.lastError).toBe('checksum storm');
  });

  it('tracks two channels independently', () => {
    const dual: DeviceWire = {
      ...DEVICE,
      sensor_type: 'temp_humidity',
      channels: [
        { unit: 'degC', range_min: -20, range_max: 60 },
        { unit: '%RH', range_min: 0, range_max: 100 },
      ],
    };
    const live = new LiveReadingView(dual);
    live.push({ serial: 1, sensor_type: 'temp_humidity', timestamp_ms: 0,
                values: [21.5, 48.2], units: ['degC', '%RH'] });
    expect(live.traces.map((t) => t.values)).toEqual([[21.5], [48.2]]);
  });
});
