/** Inquiry editor state: three capture slots, publish gating, dirty flag.
 *
 * The capture guard runs client-side before any request leaves the browser,
 * mirroring the server's 409 on a fourth data point.
 */

import { ApiClient } from './api.js';
import type { InquiryWire, MeasurementWire, SlotWire } from './types.js';

export const MAX_SLOTS = 3;

export type CaptureResult =
  | { ok: true; slot: SlotWire }
  | { ok: false; reason: string };

export class InquiryEditor {
  dirty = false;

  constructor(private api: ApiClient, public inquiry: InquiryWire) {}

  get slots(): SlotWire[] {
    return this.inquiry.slots;
  }

  get isDraft(): boolean {
    return this.inquiry.status === 'draft';
  }

  /** Capture button state: disabled once all three slots are filled. */
  get canCapture(): boolean {
    return this.isDraft && this.inquiry.slots.length < MAX_SLOTS;
  }

  /** Publish button state: needs a title and at least one capture. */
  get canPublish(): boolean {
    return this.isDraft
      && this.inquiry.title.trim().length > 0
      && this.inquiry.slots.length >= 1;
  }

  setTitle(title: string): void {
    this.inquiry.title = title;
    this.dirty = true;
  }

  setDescription(description: string): void {
    this.inquiry.description = description;
    this.dirty = true;
  }

  setNotes(notes: string): void {
    this.inquiry.notes = notes;
    this.dirty = true;
  }

  /** Persist text edits; clears the dirty flag on success. */
  async save(): Promise<void> {
    this.inquiry = await this.api.updateInquiry(this.inquiry.id, {
      title: this.inquiry.title,
      description: this.inquiry.description,
      notes: this.inquiry.notes,
    });
    this.dirty = false;
  }

  /** Fill the next slot from the latest streamed measurement. */
  async captureCurrentValue(
    measurement: MeasurementWire | null,
    label = '',
    photoRef: string | null = null,
  ): Promise<CaptureResult> {
    if (!measurement) {
      return { ok: false, reason: 'not connected to a device' };
    }
    if (!this.isDraft) {
      return { ok: false, reason: 'inquiry is already published' };
    }
    if (!this.canCapture) {
      // Never submit a fourth capture; the server would 409 it anyway.
      return { ok: false, reason: `an inquiry holds at most ${MAX_SLOTS} data points` };
    }
    const slot = await this.api.captureDataPoint(
      this.inquiry.id, measurement, label, photoRef);
    this.inquiry.slots = [...this.inquiry.slots, slot];
    return { ok: true, slot };
  }

  async publish(): Promise<InquiryWire> {
    if (this.dirty) await this.save();
    this.inquiry = await this.api.publishInquiry(this.inquiry.id);
    return this.inquiry;
  }
}
