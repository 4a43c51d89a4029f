/** Wire types mirroring the service API contracts. */

export type SensorType =
  | 'temp_humidity'
  | 'light_uv'
  | 'voc'
  | 'conductance'
  | 'body_temp'
  | 'heart_rate';

export const SENSOR_TYPES: SensorType[] = [
  'temp_humidity', 'light_uv', 'voc', 'conductance', 'body_temp', 'heart_rate',
];

export type ScoreCategory = 'null' | 'naive' | 'emerging' | 'informed';

export const SCORE_ORDER: ScoreCategory[] = ['null', 'naive', 'emerging', 'informed'];

export interface MeasurementWire {
  sensor_type: SensorType;
  timestamp_ms: number;
  values: number[];
}

export interface SlotWire {
  index: number;
  label: string;
  photo_ref: string | null;
  measurement: MeasurementWire;
}

export interface LineageWire {
  kind: 'replication' | 'remix';
  source_inquiry_id: string;
  source_class: 'other_student' | 'exemplar' | 'own';
}

export interface InquiryWire {
  id: string;
  author_id: string;
  class_id: string | null;
  sensor_type: SensorType;
  title: string;
  description: string;
  notes: string;
  slots: SlotWire[];
  status: 'draft' | 'published';
  lineage: LineageWire | null;
  created_at: string | null;
  published_at: string | null;
  is_exemplar: boolean;
  score: { category: ScoreCategory; evidence: string[]; overridden: boolean };
}

export interface PageWire {
  items: InquiryWire[];
  next_cursor: string | null;
  total: number;
}

export interface TokenWire {
  token: string;
  user_id: string;
  username: string;
  role: 'teacher' | 'student' | 'researcher';
  expires_at: string;
}

export interface DeviceWire {
  serial: number;
  sensor_type: SensorType;
  address: string;
  channels: { unit: string; range_min: number; range_max: number }[];
}

export interface StreamRecord {
  serial: number;
  sensor_type: SensorType;
  timestamp_ms: number;
  values: number[];
  units: string[];
}

export interface StreamErrorRecord {
  error: string;
  serial?: number;
}

export interface WeekBucketWire {
  week_start: string;
  events: number;
}

export interface ReportWire {
  total_inquiries: number;
  active_users: number;
  published: number;
  drafts: number;
  replications: number;
  remixes: number;
  lineage_breakdown: Record<string, { count: number; percentage: number }>;
  sensor_usage: Record<SensorType, number>;
  score_distribution: Record<ScoreCategory, number>;
  weekly_activity: WeekBucketWire[];
}
