/** Discover feed: cursor-paged published inquiries with sensor filter chips. */

import { ApiClient } from './api.js';
import type { InquiryWire, SensorType } from './types.js';
import { SENSOR_TYPES } from './types.js';

export class DiscoverFeed {
  filter: SensorType | null = null;
  items: InquiryWire[] = [];
  total = 0;
  nextCursor: string | null = null;
  loading = false;

  constructor(private api: ApiClient) {}

  get chips(): { sensor: SensorType; active: boolean }[] {
    return SENSOR_TYPES.map((sensor) => ({
      sensor,
      active: this.filter === sensor,
    }));
  }

  get hasMore(): boolean {
    return this.nextCursor !== null;
  }

  async setFilter(sensor: SensorType | null): Promise<void> {
    this.filter = sensor;
    await this.loadFirstPage();
  }

  async loadFirstPage(): Promise<void> {
    this.loading = true;
    try {
      const page = await this.api.discover({
        sensor: this.filter ?? undefined,
      });
      this.items = page.items;
      this.total = page.total;
      this.nextCursor = page.next_cursor;
    } finally {
      this.loading = false;
    }
  }

  async loadMore(): Promise<void> {
    if (!this.nextCursor || this.loading) return;
    this.loading = true;
    try {
      const page = await this.api.discover({
        sensor: this.filter ?? undefined,
        cursor: this.nextCursor,
      });
      this.items = [...this.items, ...page.items];
      this.nextCursor = page.next_cursor;
    } finally {
      this.loading = false;
    }
  }

  /** Replicate: same inquiry, fresh data; opens as a new draft. */
  replicate(inquiryId: string): Promise<InquiryWire> {
    return this.api.replicateInquiry(inquiryId);
  }

  /** Remix: start from a published inquiry; opens as a new draft. */
  remix(inquiryId: string): Promise<InquiryWire> {
    return this.api.remixInquiry(inquiryId);
  }
}
