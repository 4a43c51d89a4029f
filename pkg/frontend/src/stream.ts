/** NDJSON measurement stream subscription with reconnect. */

import type { StreamErrorRecord, StreamRecord } from './types.js';

export interface StreamHandlers {
  onRecord: (record: StreamRecord) => void;
  onError?: (error: StreamErrorRecord) => void;
  onStateChange?: (state: StreamState) => void;
}

export type StreamState = 'connecting' | 'live' | 'disconnected' | 'closed';

export interface StreamOptions {
  /** stop reconnecting after this many consecutive failures */
  maxRetries?: number;
  /** initial backoff in ms, doubled per retry up to 10 s */
  backoffMs?: number;
  /** ask the server to end the stream after N records (tests, snapshots) */
  limit?: number;
}

export interface StreamSubscription {
  close: () => void;
}

export function subscribeDeviceStream(
  baseUrl: string,
  token: string,
  serial: number,
  handlers: StreamHandlers,
  options: StreamOptions = {},
  fetchImpl: typeof fetch = fetch,
): StreamSubscription {
  const maxRetries = options.maxRetries ?? 5;
  let backoff = options.backoffMs ?? 500;
  let retries = 0;
  let closed = false;
  let controller: AbortController | null = null;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const setState = (state: StreamState) => handlers.onStateChange?.(state);

  const scheduleRetry = () => {
    if (closed || retries >= maxRetries) {
      setState('closed');
      return;
    }
    retries += 1;
    setState('disconnected');
    timer = setTimeout(run, backoff);
    backoff = Math.min(backoff * 2, 10_000);
  };

  const run = async () => {
    if (closed) return;
    setState('connecting');
    controller = new AbortController();
    const params = options.limit ? `?limit=${options.limit}` : '';
    try {
      const response = await fetchImpl(
        `${baseUrl}/devices/${serial}/stream${params}`,
        { headers: { Authorization: `Bearer ${token}` }, signal: controller.signal },
      );
      if (!response.ok || !response.body) {
        scheduleRetry();
        return;
      }
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      let buffer = '';
      setState('live');
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        let newline;
        while ((newline = buffer.indexOf('\n')) >= 0) {
          const line = buffer.slice(0, newline).trim();
          buffer = buffer.slice(newline + 1);
          if (!line) continue;
          const record = JSON.parse(line);
          if ('error' in record) {
            handlers.onError?.(record as StreamErrorRecord);
            setState('disconnected');
          } else {
            retries = 0;
            backoff = options.backoffMs ?? 500;
            handlers.onRecord(record as StreamRecord);
          }
        }
      }
      // Server ended the stream: either the limit was reached or the
      // device faulted; reconnect unless the caller closed us.
      if (!closed && options.limit === undefined) {
        scheduleRetry();
      } else {
        setState('closed');
      }
    } catch (err) {
      if (!closed) scheduleRetry();
    }
  };

  void run();

  return {
    close: () => {
      closed = true;
      if (timer) clearTimeout(timer);
      controller?.abort();
      setState('closed');
    },
  };
}
