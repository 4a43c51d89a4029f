import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { InquiryEditor } from '../src/editor.js';
import { fakeFetch, makeInquiry, makeSlot } from './helpers.js';

const MEASUREMENT = { sensor_type: 'heart_rate' as const, timestamp_ms: 0, values: [72] };

function editorWith(slots: number, overrides = {}) {
  const inquiry = makeInquiry({
    slots: Array.from({ length: slots }, (_, i) => makeSlot(i, `p${i}`)),
    ...overrides,
  });
  const { impl, calls } = fakeFetch({
    'POST /inquiries/q1/datapoints': (_url, init) => {
      const body = JSON.parse(String(init.body));
      return makeSlot(inquiry.slots.length, body.label);
    },
    'PATCH /inquiries/q1': () => inquiry,
    'POST /inquiries/q1/publish': () =>
      ({ ...inquiry, status: 'published', published_at: 'now' }),
  });
  return { editor: new InquiryEditor(new ApiClient('', impl), inquiry), calls };
}

describe('capture guard', () => {
  it('captures into the next free slot', async () => {
    const { editor } = editorWith(0);
    const result = await editor.captureCurrentValue(MEASUREMENT, 'resting');
    expect(result.ok).toBe(true);
    expect(editor.slots.length).toBe(1);
    expect(editor.canCapture).toBe(true);
  });

  it('disables the capture button at three slots', () => {
    expect(editorWith(2).editor.canCapture).toBe(true);
    expect(editorWith(3).editor.canCapture).toBe(false);
  });

  it('never submits a fourth capture', async () => {
    const { editor, calls } = editorWith(3);
    const result = await editor.captureCurrentValue(MEASUREMENT, 'extra');
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.reason).toMatch(/at most 3/);
    // The guard fired client-side: no request left the app.
    expect(calls.length).toBe(0);
  });

  it('refuses to capture while disconnected', async () => {
    const { editor, calls } = editorWith(0);
    const result = await editor.captureCurrentValue(null);
    expect(result.ok).toBe(false);
    expect(calls.length).toBe(0);
  });

  it('refuses to capture into a published inquiry', async () => {
    const { editor, calls } = editorWith(1, { status: 'published', published_at: 'x', title: 't' });
    const result = await editor.captureCurrentValue(MEASUREMENT);
    expect(result.ok).toBe(false);
    expect(calls.length).toBe(0);
  });
});

describe('publish gating', () => {
  it('needs a title and at least one slot', () => {
    expect(editorWith(0).editor.canPublish).toBe(false);
    expect(editorWith(1).editor.canPublish).toBe(false); // untitled
    expect(editorWith(0, { title: 'Pulse' }).editor.canPublish).toBe(false);
    expect(editorWith(1, { title: 'Pulse' }).editor.canPublish).toBe(true);
    expect(editorWith(1, { title: '   ' }).editor.canPublish).toBe(false);
  });

  it('publish flushes dirty edits first', async () => {
    const { editor, calls } = editorWith(1, { title: 'Pulse' });
    editor.setNotes('it went up');
    expect(editor.dirty).toBe(true);
    await editor.publish();
    expect(calls.map((c) => c.method)).toEqual(['PATCH', 'POST']);
  });
});

describe('dirty flag', () => {
  it('tracks edits and clears on save', async () => {
    const { editor } = editorWith(0);
    expect(editor.dirty).toBe(false);
    editor.setTitle('Heart');
    editor.setDescription('beats');
    expect(editor.dirty).toBe(true);
    await editor.save();
    expect(editor.dirty).toBe(false);
  });
});
