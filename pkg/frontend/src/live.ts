/** Rolling window of live readings for one connected device. */

import type { DeviceWire, StreamRecord } from './types.js';

export const WINDOW_SIZE = 120;

export type ConnectionState = 'connecting' | 'live' | 'disconnected' | 'closed';

export interface ChannelTrace {
  unit: string;
  values: number[]; // bounded to WINDOW_SIZE, oldest first
}

export class LiveReadingView {
  state: ConnectionState = 'connecting';
  lastError: string | null = null;
  traces: ChannelTrace[] = [];
  latest: StreamRecord | null = null;
  samples = 0;

  constructor(public device: DeviceWire, private windowSize = WINDOW_SIZE) {
    this.traces = device.channels.map((ch) => ({ unit: ch.unit, values: [] }));
  }

  get descriptorSummary(): string {
    const units = this.device.channels.map((ch) => ch.unit).join(', ');
    return `${this.device.sensor_type} #${this.device.serial.toString(16)} (${units})`;
  }

  push(record: StreamRecord): void {
    this.latest = record;
    this.samples += 1;
    record.values.forEach((value, channel) => {
      const trace = this.traces[channel];
      if (!trace) return;
      trace.values.push(value);
      if (trace.values.length > this.windowSize) {
        trace.values.splice(0, trace.values.length - this.windowSize);
      }
    });
  }

  setState(state: ConnectionState): void {
    this.state = state;
  }

  setError(message: string): void {
    this.lastError = message;
    this.state = 'disconnected';
  }

  /** Current value per channel with unit labels, for the big readout. */
  readout(): { value: number; unit: string }[] {
    if (!this.latest) return [];
    return this.latest.values.map((value, i) => ({
      value,
      unit: this.latest!.units[i] ?? '',
    }));
  }
}
