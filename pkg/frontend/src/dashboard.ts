/** Teacher dashboard view-model over the class report endpoint.
 *
 * Every number shown comes from the service; this module only reshapes the
 * payload for rendering (bar widths, ordering), never recomputes aggregates.
 */

import { ApiClient } from './api.js';
import type { ReportWire, ScoreCategory, SensorType } from './types.js';
import { SCORE_ORDER } from './types.js';

export interface Bar {
  label: string;
  count: number;
  /** 0..1 relative to the tallest bar, for rendering */
  fraction: number;
}

export class TeacherDashboard {
  report: ReportWire | null = null;
  activity: { week_start: string; events: number }[] = [];

  constructor(private api: ApiClient, public classId: string) {}

  async load(): Promise<void> {
    this.report = await this.api.classReport(this.classId);
    this.activity = (await this.api.classActivity(this.classId)).weekly_activity;
  }

  get headline(): { label: string; value: number }[] {
    if (!this.report) return [];
    return [
      { label: 'Inquiries', value: this.report.total_inquiries },
      { label: 'Active students', value: this.report.active_users },
      { label: 'Published', value: this.report.published },
      { label: 'Drafts', value: this.report.drafts },
      { label: 'Replications', value: this.report.replications },
      { label: 'Remixes', value: this.report.remixes },
    ];
  }

  sensorBars(): Bar[] {
    if (!this.report) return [];
    const entries = Object.entries(this.report.sensor_usage) as
      [SensorType, number][];
    entries.sort((a, b) => b[1] - a[1]);
    const top = Math.max(1, ...entries.map(([, n]) => n));
    return entries.map(([sensor, count]) => ({
      label: sensor, count, fraction: count / top,
    }));
  }

  scoreBars(): Bar[] {
    if (!this.report) return [];
    const top = Math.max(1, ...Object.values(this.report.score_distribution));
    return SCORE_ORDER.map((category) => ({
      label: category,
      count: this.report!.score_distribution[category],
      fraction: this.report!.score_distribution[category] / top,
    }));
  }

  /** The category whose server-side count is tallest. */
  modalScore(): ScoreCategory | null {
    if (!this.report) return null;
    let best: ScoreCategory | null = null;
    let bestCount = -1;
    for (const category of SCORE_ORDER) {
      const count = this.report.score_distribution[category];
      if (count > bestCount) {
        best = category;
        bestCount = count;
      }
    }
    return best;
  }

  activityBars(): Bar[] {
    const top = Math.max(1, ...this.activity.map((b) => b.events));
    return this.activity.map((bucket) => ({
      label: bucket.week_start.slice(0, 10),
      count: bucket.events,
      fraction: bucket.events / top,
    }));
  }
}
