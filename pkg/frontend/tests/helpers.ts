/** Shared fakes: an in-memory fetch standing in for the service. */

import type { InquiryWire, SlotWire } from '../src/types.js';

export function makeInquiry(overrides: Partial<InquiryWire> = {}): InquiryWire {
  return {
    id: 'q1',
    author_id: 'u1',
    class_id: 'c1',
    sensor_type: 'heart_rate',
    title: '',
    description: '',
    notes: '',
    slots: [],
    status: 'draft',
    lineage: null,
    created_at: '2021-06-01T09:00:00+00:00',
    published_at: null,
    is_exemplar: false,
    score: { category: 'null', evidence: [], overridden: false },
    ...overrides,
  };
}

export function makeSlot(index: number, label = ''): SlotWire {
  return {
    index,
    label,
    photo_ref: null,
    measurement: { sensor_type: 'heart_rate', timestamp_ms: index * 1000, values: [72] },
  };
}

export type Route = (url: string, init: RequestInit) => unknown;

/** Minimal fetch fake: match "METHOD path-prefix" keys, JSON responses. */
export function fakeFetch(routes: Record<string, Route>) {
  const calls: { method: string; url: string; body: unknown }[] = [];
  const impl = (async (input: RequestInfo | URL, init: RequestInit = {}) => {
    const url = String(input);
    const method = (init.method ?? 'GET').toUpperCase();
    const path = url.replace(/^https?:\/\/[^/]+/, '').split('?')[0];
    calls.push({
      method,
      url,
      body: typeof init.body === 'string' ? JSON.parse(init.body) : init.body,
    });
    for (const [key, handler] of Object.entries(routes)) {
      const [routeMethod, routePath] = key.split(' ');
      if (method === routeMethod && path === routePath) {
        const payload = handler(url, init);
        if (payload instanceof Response) return payload;
        return new Response(JSON.stringify(payload), {
          status: method === 'POST' ? 201 : 200,
          headers: { 'Content-Type': 'application/json' },
        });
      }
    }
    return new Response(
      JSON.stringify({ error: 'not_found', detail: `no route ${method} ${path}` }),
      { status: 404 },
    );
  }) as typeof fetch;
  return { impl, calls };
}
