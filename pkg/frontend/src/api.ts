/** Typed client for the platform service. All aggregates come from here;
 * the UI never recomputes counts on its own. */

import type {
  DeviceWire,
  InquiryWire,
  MeasurementWire,
  PageWire,
  ReportWire,
  TokenWire,
  WeekBucketWire,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
    public fields: string[] = [],
  ) {
    super(`${status} ${code}: ${detail}`);
  }
}

export interface DiscoverQuery {
  sensor?: string;
  cursor?: string;
  classId?: string;
  limit?: number;
  mine?: boolean;
}

export class ApiClient {
  token: string | null = null;

  constructor(
    public baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    const out: Record<string, string> = { ...extra };
    if (this.token) out['Authorization'] = `Bearer ${this.token}`;
    return out;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: this.headers(
        body === undefined ? {} : { 'Content-Type': 'application/json' },
      ),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = 'error';
      let detail = response.statusText;
      let fields: string[] = [];
      try {
        const payload = await response.json();
        code = payload.error ?? code;
        detail = payload.detail ?? JSON.stringify(payload);
        fields = payload.fields ?? [];
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, code, detail, fields);
    }
    return (await response.json()) as T;
  }

  // -- auth ------------------------------------------------------------

  async register(username: string, password: string,
                 role: 'teacher' | 'student' = 'student'): Promise<TokenWire> {
    const session = await this.request<TokenWire>('POST', '/auth/register',
                                                  { username, password, role });
    this.token = session.token;
    return session;
  }

  async login(username: string, password: string): Promise<TokenWire> {
    const session = await this.request<TokenWire>('POST', '/auth/login',
                                                  { username, password });
    this.token = session.token;
    return session;
  }

  // -- classes -----------------------------------------------------------

  createClass(name: string) {
    return this.request<{ id: string; name: string; join_code: string }>(
      'POST', '/classes', { name });
  }

  joinClass(code: string) {
    return this.request<{ class_id: string; name: string }>(
      'POST', `/classes/${encodeURIComponent(code)}/join`);
  }

  classReport(classId: string) {
    return this.request<ReportWire>('GET', `/classes/${classId}/report`);
  }

  classActivity(classId: string) {
    return this.request<{ weekly_activity: WeekBucketWire[] }>(
      'GET', `/classes/${classId}/activity`);
  }

  // -- inquiries -----------------------------------------------------------

  createInquiry(classId: string, sensorType: string, title = '',
                description = '', notes = '') {
    return this.request<InquiryWire>('POST', '/inquiries', {
      class_id: classId, sensor_type: sensorType, title, description, notes,
    });
  }

  getInquiry(id: string) {
    return this.request<InquiryWire>('GET', `/inquiries/${id}`);
  }

  updateInquiry(id: string, patch: { title?: string; description?: string;
                                     notes?: string }) {
    return this.request<InquiryWire>('PATCH', `/inquiries/${id}`, patch);
  }

  captureDataPoint(id: string, measurement: MeasurementWire, label = '',
                   photoRef: string | null = null) {
    return this.request<InquiryWire['slots'][number]>(
      'POST', `/inquiries/${id}/datapoints`,
      { measurement, label, photo_ref: photoRef });
  }

  publishInquiry(id: string) {
    return this.request<InquiryWire>('POST', `/inquiries/${id}/publish`);
  }

  addComment(id: string, body: string) {
    return this.request<{ id: string }>('POST', `/inquiries/${id}/comments`,
                                        { body });
  }

  comments(id: string) {
    return this.request<{ items: { id: string; author_id: string; body: string;
                                   created_at: string }[] }>(
      'GET', `/inquiries/${id}/comments`);
  }

  replicateInquiry(id: string) {
    return this.request<InquiryWire>('POST', `/inquiries/${id}/replicate`);
  }

  remixInquiry(id: string) {
    return this.request<InquiryWire>('POST', `/inquiries/${id}/remix`);
  }

  discover(query: DiscoverQuery = {}) {
    const params = new URLSearchParams();
    if (query.sensor) params.set('sensor', query.sensor);
    if (query.cursor) params.set('cursor', query.cursor);
    if (query.classId) params.set('class_id', query.classId);
    if (query.limit) params.set('limit', String(query.limit));
    if (query.mine) params.set('mine', 'true');
    const suffix = params.toString() ? `?${params}` : '';
    return this.request<PageWire>('GET', `/inquiries${suffix}`);
  }

  exemplars(sensor?: string) {
    const suffix = sensor ? `?sensor=${encodeURIComponent(sensor)}` : '';
    return this.request<{ items: InquiryWire[] }>('GET', `/exemplars${suffix}`);
  }

  // -- photos ---------------------------------------------------------------

  async uploadPhoto(data: Uint8Array | ArrayBuffer,
                    mediaType = 'image/jpeg'): Promise<{ id: string }> {
    const body: BodyInit =
      data instanceof Uint8Array
        ? data.buffer.slice(data.byteOffset, data.byteOffset + data.byteLength) as ArrayBuffer
        : data;
    const response = await this.fetchImpl(`${this.baseUrl}/photos`, {
      method: 'POST',
      headers: this.headers({ 'Content-Type': mediaType }),
      body,
    });
    if (!response.ok) {
      throw new ApiError(response.status, 'photo_upload', await response.text());
    }
    return (await response.json()) as { id: string };
  }

  photoUrl(photoId: string): string {
    return `${this.baseUrl}/photos/${photoId}`;
  }

  // -- devices ----------------------------------------------------------------

  listDevices() {
    return this.request<{ items: DeviceWire[] }>('GET', '/devices');
  }
}
