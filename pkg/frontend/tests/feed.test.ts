import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { DiscoverFeed } from '../src/feed.js';
import { fakeFetch, makeInquiry } from './helpers.js';

function feedWithPages() {
  const all = Array.from({ length: 25 }, (_, i) =>
    makeInquiry({
      id: `q${i}`,
      title: `hr ${i}`,
      status: 'published',
      published_at: 'x',
      sensor_type: i < 20 ? 'heart_rate' : 'voc',
    }));
  const { impl, calls } = fakeFetch({
    'GET /inquiries': (url) => {
      const params = new URL(url, 'http://x').searchParams;
      const sensor = params.get('sensor');
      const matching = sensor ? all.filter((i) => i.sensor_type === sensor) : all;
      const start = params.get('cursor') ? Number(params.get('cursor')) : 0;
      const page = matching.slice(start, start + 10);
      const next = start + 10 < matching.length ? String(start + 10) : null;
      return { items: page, next_cursor: next, total: matching.length };
    },
    'POST /inquiries/q3/replicate': () =>
      makeInquiry({ id: 'q-new', title: 'hr 3', lineage: {
        kind: 'replication', source_inquiry_id: 'q3', source_class: 'other_student',
      } }),
  });
  return { feed: new DiscoverFeed(new ApiClient('', impl)), calls };
}

describe('DiscoverFeed', () => {
  it('loads the first page with total', async () => {
    const { feed } = feedWithPages();
    await feed.loadFirstPage();
    expect(feed.items.length).toBe(10);
    expect(feed.total).toBe(25);
    expect(feed.hasMore).toBe(true);
  });

  it('loadMore appends until the cursor runs out', async () => {
    const { feed } = feedWithPages();
    await feed.loadFirstPage();
    await feed.loadMore();
    await feed.loadMore();
    expect(feed.items.length).toBe(25);
    expect(feed.hasMore).toBe(false);
    await feed.loadMore(); // no-op
    expect(feed.items.length).toBe(25);
  });

  it('sensor filter chips restrict and reset the page', async () => {
    const { feed } = feedWithPages();
    await feed.setFilter('heart_rate');
    expect(feed.total).toBe(20);
    expect(feed.items.every((i) => i.sensor_type === 'heart_rate')).toBe(true);
    expect(feed.chips.find((c) => c.sensor === 'heart_rate')?.active).toBe(true);
    await feed.setFilter('voc');
    expect(feed.total).toBe(5);
    expect(feed.hasMore).toBe(false);
  });

  it('empty filter result is a valid state', async () => {
    const { feed } = feedWithPages();
    await feed.setFilter('body_temp');
    expect(feed.items).toEqual([]);
    expect(feed.total).toBe(0);
  });

  it('replicate returns the fresh draft for the editor', async () => {
    const { feed } = feedWithPages();
    const draft = await feed.replicate('q3');
    expect(draft.status).toBe('draft');
    expect(draft.lineage?.kind).toBe('replication');
    expect(draft.slots).toEqual([]);
  });
});
