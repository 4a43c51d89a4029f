/** Scripted browser session against a live service with virtual devices.
 *
 * The session mirrors a student's lesson: connect to a heart-rate device
 * through the gateway, capture three labelled points, get blocked on the
 * fourth, publish, find the inquiry under the heart-rate filter, replicate
 * it, and check the teacher dashboard shows a Naive-modal distribution.
 */

import { ChildProcess, spawn } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { InquiryEditor } from '../src/editor.js';
import { DiscoverFeed } from '../src/feed.js';
import { LiveReadingView } from '../src/live.js';
import { subscribeDeviceStream } from '../src/stream.js';
import { TeacherDashboard } from '../src/dashboard.js';
import type { DeviceWire, StreamRecord } from '../src/types.js';

const PORT = 18750 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error('service did not come up');
    await new Promise((r) => setTimeout(r, 300));
  }
}

beforeAll(async () => {
  server = spawn(
    'python3',
    ['-m', 'senselab.cli', 'serve', '--port', String(PORT),
     '--devices', '1', '--seed', '3', '--time-scale', '0.05'],
    { stdio: ['ignore', 'inherit', 'inherit'] },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server?.kill('SIGINT');
});

describe('scripted classroom session', () => {
  const teacher = new ApiClient(BASE);
  const student = new ApiClient(BASE);
  let classId: string;
  let joinCode: string;
  let device: DeviceWire;
  let publishedId: string;

  it('teacher creates a class, student joins by code', async () => {
    await teacher.register(`teach-${PORT}`, 'pw', 'teacher');
    const group = await teacher.createClass('Year 9 Science');
    classId = group.id;
    joinCode = group.join_code;
    await student.register(`kid-${PORT}`, 'pw', 'student');
    const joined = await student.joinClass(joinCode);
    expect(joined.class_id).toBe(classId);
  });

  it('connects to the virtual heart-rate device via the gateway', async () => {
    const devices = (await student.listDevices()).items;
    expect(devices.length).toBe(6);
    device = devices.find((d) => d.sensor_type === 'heart_rate')!;
    expect(device).toBeDefined();

    const live = new LiveReadingView(device);
    const records: StreamRecord[] = [];
    await new Promise<void>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error('no stream data')), 20_000);
      const subscription = subscribeDeviceStream(
        BASE, student.token!, device.serial,
        {
          onRecord: (record) => {
            live.push(record);
            records.push(record);
            if (records.length >= 5) {
              clearTimeout(timer);
              subscription.close();
              resolve();
            }
          },
          onStateChange: (s) => live.setState(s),
        },
      );
    });
    expect(live.samples).toBeGreaterThanOrEqual(5);
    expect(live.readout()[0]?.unit).toBe('bpm');
    expect(records.every((r) => r.serial === device.serial)).toBe(true);
  }, 30_000);

  it('captures three points and is blocked on the fourth', async () => {
    const draft = await student.createInquiry(classId, 'heart_rate', 'Pulse check');
    const editor = new InquiryEditor(student, draft);
    const labels = ['resting', 'after running', 'after rest'];
    for (const [i, label] of labels.entries()) {
      const result = await editor.captureCurrentValue(
        { sensor_type: 'heart_rate', timestamp_ms: i * 1000, values: [70 + i] },
        label,
      );
      expect(result.ok).toBe(true);
    }
    expect(editor.canCapture).toBe(false);

    // Client guard refuses locally...
    const blocked = await editor.captureCurrentValue(
      { sensor_type: 'heart_rate', timestamp_ms: 4000, values: [75] }, '4th');
    expect(blocked.ok).toBe(false);

    // ...and the server mirrors it with a 409 if a buggy client tries anyway.
    const direct = await fetch(`${BASE}/inquiries/${draft.id}/datapoints`, {
      method: 'POST',
      headers: {
        Authorization: `Bearer ${student.token}`,
        'Content-Type': 'application/json',
      },
      body: JSON.stringify({
        measurement: { sensor_type: 'heart_rate', timestamp_ms: 4000, values: [75] },
        label: '4th',
      }),
    });
    expect(direct.status).toBe(409);
    expect((await direct.json()).error).toBe('slot_limit');

    const published = await editor.publish();
    expect(published.status).toBe('published');
    publishedId = published.id;
  });

  it('finds the inquiry under the heart-rate filter and replicates it', async () => {
    const feed = new DiscoverFeed(student);
    await feed.setFilter('heart_rate');
    expect(feed.items.map((i) => i.id)).toContain(publishedId);

    await feed.setFilter('voc');
    expect(feed.items.map((i) => i.id)).not.toContain(publishedId);

    await feed.setFilter('heart_rate');
    const replica = await feed.replicate(publishedId);
    expect(replica.status).toBe('draft');
    expect(replica.slots).toEqual([]); // the student re-collects data
    expect(replica.lineage).toEqual({
      kind: 'replication',
      source_inquiry_id: publishedId,
      source_class: 'own',
    });
    // Replication means re-collecting the data: fill and publish the copy.
    const replicaEditor = new InquiryEditor(student, replica);
    expect(replicaEditor.canCapture).toBe(true);
    for (const [i, label] of ['resting', 'after running'].entries()) {
      const captured = await replicaEditor.captureCurrentValue(
        { sensor_type: 'heart_rate', timestamp_ms: i * 1000, values: [68 + i] },
        label,
      );
      expect(captured.ok).toBe(true);
    }
    const republished = await replicaEditor.publish();
    expect(republished.status).toBe('published');
  });

  it('teacher dashboard shows the Naive-modal distribution', async () => {
    const dashboard = new TeacherDashboard(teacher, classId);
    await dashboard.load();
    expect(dashboard.report?.total_inquiries).toBe(2);
    expect(dashboard.report?.published).toBe(2);
    expect(dashboard.report?.replications).toBe(1);
    expect(dashboard.report?.score_distribution.naive).toBe(2);
    expect(dashboard.modalScore()).toBe('naive');
    const naiveBar = dashboard.scoreBars().find((b) => b.label === 'naive');
    expect(naiveBar?.fraction).toBe(1);
    expect(dashboard.activityBars().length).toBeGreaterThan(0);
  });
});
