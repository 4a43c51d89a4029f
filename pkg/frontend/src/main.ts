/** Single-page app wiring: login, live panel, editor, feed, dashboard. */

import { ApiClient, ApiError } from './api.js';
import { TeacherDashboard } from './dashboard.js';
import { button, clear, el } from './dom.js';
import { InquiryEditor } from './editor.js';
import { DiscoverFeed } from './feed.js';
import { LiveReadingView } from './live.js';
import { subscribeDeviceStream, type StreamSubscription } from './stream.js';
import type { DeviceWire, InquiryWire, SensorType } from './types.js';

const api = new ApiClient(
  (window as unknown as { SENSELAB_API?: string }).SENSELAB_API ?? '',
);

interface AppState {
  userId: string | null;
  role: string | null;
  classId: string | null;
  live: LiveReadingView | null;
  subscription: StreamSubscription | null;
  editor: InquiryEditor | null;
  feed: DiscoverFeed;
  pendingPhoto: string | null;
}

const state: AppState = {
  userId: null,
  role: null,
  classId: null,
  live: null,
  subscription: null,
  editor: null,
  feed: new DiscoverFeed(api),
  pendingPhoto: null,
};

const $ = (id: string) => document.getElementById(id) as HTMLElement;

function flash(message: string, isError = false): void {
  const bar = $('flash');
  bar.textContent = message;
  bar.className = isError ? 'flash error' : 'flash';
  setTimeout(() => { bar.textContent = ''; bar.className = 'flash'; }, 4000);
}

async function guard<T>(work: () => Promise<T>): Promise<T | null> {
  try {
    return await work();
  } catch (err) {
    flash(err instanceof ApiError ? err.detail : String(err), true);
    return null;
  }
}

// -- auth panel ------------------------------------------------------------

function renderAuth(): void {
  const panel = clear($('auth'));
  const username = el('input', { placeholder: 'username' });
  const password = el('input', { placeholder: 'password', type: 'password' });
  const role = el('select', {});
  role.append(el('option', { value: 'student' }, 'student'),
              el('option', { value: 'teacher' }, 'teacher'));
  const joinCode = el('input', { placeholder: 'class code (students)' });
  const className = el('input', { placeholder: 'new class name (teachers)' });

  const finishLogin = async () => {
    state.role = role.value;
    if (role.value === 'teacher' && className.value.trim()) {
      const group = await guard(() => api.createClass(className.value.trim()));
      if (group) {
        state.classId = group.id;
        flash(`class ${group.name} created; join code ${group.join_code}`);
      }
    } else if (joinCode.value.trim()) {
      const joined = await guard(() => api.joinClass(joinCode.value.trim()));
      if (joined) {
        state.classId = joined.class_id;
        flash(`joined ${joined.name}`);
      }
    }
    panel.hidden = true;
    await renderDevices();
    await refreshFeed();
    if (state.role === 'teacher' && state.classId) await renderDashboard();
  };

  panel.append(
    username, password, role, joinCode, className,
    button('register', () => void guard(async () => {
      const session = await api.register(
        username.value, password.value, role.value as 'teacher' | 'student');
      state.userId = session.user_id;
      await finishLogin();
    })),
    button('log in', () => void guard(async () => {
      const session = await api.login(username.value, password.value);
      state.userId = session.user_id;
      role.value = session.role === 'teacher' ? 'teacher' : 'student';
      await finishLogin();
    })),
  );
}

// -- live panel ----------------------------------------------------------------

async function renderDevices(): Promise<void> {
  const listing = await guard(() => api.listDevices());
  if (!listing) return;
  const panel = clear($('devices'));
  for (const device of listing.items) {
    panel.append(button(
      `${device.sensor_type} #${device.serial.toString(16)}`,
      () => connectDevice(device),
    ));
  }
}

function connectDevice(device: DeviceWire): void {
  state.subscription?.close();
  const live = new LiveReadingView(device);
  state.live = live;
  state.subscription = subscribeDeviceStream(
    api.baseUrl, api.token ?? '', device.serial,
    {
      onRecord: (record) => { live.push(record); renderLive(); },
      onError: (error) => { live.setError(error.error); renderLive(); },
      onStateChange: (s) => { live.setState(s); renderLive(); },
    },
  );
  renderLive();
}

function renderLive(): void {
  const panel = clear($('live'));
  const live = state.live;
  if (!live) {
    panel.append(el('p', {}, 'Plug in: pick a device above.'));
    return;
  }
  panel.append(el('h3', {}, live.descriptorSummary),
               el('p', { class: `state ${live.state}` }, `state: ${live.state}`));
  if (live.lastError) {
    panel.append(el('p', { class: 'error' }, `device error: ${live.lastError}`));
  }
  for (const { value, unit } of live.readout()) {
    panel.append(el('div', { class: 'readout' }, `${value.toFixed(2)} ${unit}`));
  }
  for (const trace of live.traces) {
    panel.append(renderSparkline(trace.values, trace.unit));
  }
  const label = el('input', { placeholder: 'label this data point' });
  const photo = el('input', { type: 'file', accept: 'image/*' });
  photo.addEventListener('change', () => void uploadPickedPhoto(photo));
  const capture = button('capture data point', () => void captureNow(label.value));
  capture.disabled = !(state.editor?.canCapture ?? false) || live.state !== 'live';
  panel.append(label, photo, capture);
}

function renderSparkline(values: number[], unit: string): HTMLElement {
  const canvas = el('canvas', { width: '240', height: '40', title: unit });
  const ctx = canvas.getContext('2d');
  if (ctx && values.length > 1) {
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const span = hi - lo || 1;
    ctx.beginPath();
    values.forEach((v, i) => {
      const x = (i / (values.length - 1)) * 240;
      const y = 38 - ((v - lo) / span) * 36;
      i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  return canvas;
}

async function uploadPickedPhoto(input: HTMLInputElement): Promise<void> {
  const file = input.files?.[0];
  if (!file) return;
  const bytes = new Uint8Array(await file.arrayBuffer());
  const uploaded = await guard(() => api.uploadPhoto(bytes, file.type));
  if (uploaded) {
    state.pendingPhoto = uploaded.id;
    flash('photo attached to the next capture');
  }
}

async function captureNow(label: string): Promise<void> {
  if (!state.editor || !state.live?.latest) {
    flash('open a draft and connect a device first', true);
    return;
  }
  const { sensor_type, timestamp_ms, values } = state.live.latest;
  const result = await guard(() => state.editor!.captureCurrentValue(
    { sensor_type, timestamp_ms, values }, label, state.pendingPhoto));
  state.pendingPhoto = null;
  if (result && !result.ok) flash(result.reason, true);
  renderEditor();
  renderLive();
}

// -- editor panel ------------------------------------------------------------------

function openEditor(inquiry: InquiryWire): void {
  state.editor = new InquiryEditor(api, inquiry);
  renderEditor();
  renderLive();
}

async function newInquiry(): Promise<void> {
  if (!state.classId || !state.live) {
    flash('join a class and connect a device first', true);
    return;
  }
  const created = await guard(() => api.createInquiry(
    state.classId!, state.live!.device.sensor_type));
  if (created) openEditor(created);
}

function renderEditor(): void {
  const panel = clear($('editor'));
  const editor = state.editor;
  panel.append(button('new inquiry from connected device', () => void newInquiry()));
  if (!editor) return;
  const title = el('input', { placeholder: 'title', value: editor.inquiry.title });
  title.addEventListener('input', () => { editor.setTitle(title.value); renderEditorButtons(); });
  const description = el('textarea', { placeholder: 'description' },
                         editor.inquiry.description);
  description.addEventListener('input', () => editor.setDescription(description.value));
  const notes = el('textarea', { placeholder: 'notes' }, editor.inquiry.notes);
  notes.addEventListener('input', () => editor.setNotes(notes.value));

  const slots = el('ul', {});
  for (const slot of editor.slots) {
    const parts = slot.measurement.values.map((v) => v.toFixed(2)).join(', ');
    const item = el('li', {}, `#${slot.index} [${parts}] ${slot.label}`);
    if (slot.photo_ref) {
      item.append(' ', el('img', {
        src: api.photoUrl(slot.photo_ref), class: 'thumb', alt: slot.label,
      }));
    }
    slots.append(item);
  }
  panel.append(
    el('h3', {}, editor.inquiry.status === 'draft' ? 'Draft' : 'Published'),
    title, description, notes, slots,
  );
  renderEditorButtons(panel);
}

function renderEditorButtons(panel?: HTMLElement): void {
  const host = panel ?? $('editor');
  host.querySelector('.editor-buttons')?.remove();
  const editor = state.editor;
  if (!editor) return;
  const row = el('div', { class: 'editor-buttons' });
  const save = button('save draft', () => void guard(async () => {
    await editor.save();
    flash('draft saved');
  }));
  save.disabled = !editor.dirty;
  const publish = button('publish', () => void guard(async () => {
    await editor.publish();
    flash('published');
    renderEditor();
    await refreshFeed();
  }));
  publish.disabled = !editor.canPublish;
  row.append(save, publish,
             el('span', {}, ` captures: ${editor.slots.length}/3`));
  host.append(row);
}

// -- discover feed ---------------------------------------------------------------------

async function refreshFeed(): Promise<void> {
  await guard(() => state.feed.loadFirstPage());
  renderFeed();
}

function renderFeed(): void {
  const panel = clear($('feed'));
  const chips = el('div', { class: 'chips' });
  chips.append(button('all', () => void guard(async () => {
    await state.feed.setFilter(null); renderFeed();
  })));
  for (const chip of state.feed.chips) {
    const node = button(chip.sensor, () => void guard(async () => {
      await state.feed.setFilter(chip.sensor); renderFeed();
    }));
    if (chip.active) node.className = 'active';
    chips.append(node);
  }
  panel.append(chips, el('p', {}, `${state.feed.total} published inquiries`));
  const list = el('ul', {});
  for (const inquiry of state.feed.items) {
    const item = el('li', {},
                    el('strong', {}, inquiry.title || '(untitled)'),
                    ` — ${inquiry.sensor_type}`);
    if (inquiry.lineage) {
      item.append(el('em', { class: 'badge' }, ` ${inquiry.lineage.kind}`));
    }
    item.append(
      button('replicate', () => void guard(async () => {
        const draft = await state.feed.replicate(inquiry.id);
        openEditor(draft);
        flash('replication draft opened; collect your own data');
      })),
      button('remix', () => void guard(async () => {
        const draft = await state.feed.remix(inquiry.id);
        openEditor(draft);
        flash('remix draft opened');
      })),
    );
    list.append(item);
  }
  panel.append(list);
  if (state.feed.hasMore) {
    panel.append(button('more', () => void guard(async () => {
      await state.feed.loadMore(); renderFeed();
    })));
  }
}

// -- teacher dashboard --------------------------------------------------------------------

async function renderDashboard(): Promise<void> {
  if (!state.classId) return;
  const dashboard = new TeacherDashboard(api, state.classId);
  const loaded = await guard(() => dashboard.load());
  if (loaded === null && dashboard.report === null) return;
  const panel = clear($('dashboard'));
  panel.append(el('h3', {}, 'Class report'));
  const headline = el('div', { class: 'headline' });
  for (const { label, value } of dashboard.headline) {
    headline.append(el('span', {}, `${label}: ${value}`));
  }
  panel.append(headline, el('h4', {}, 'Sensors'));
  for (const bar of dashboard.sensorBars()) {
    panel.append(renderBar(bar.label, bar.count, bar.fraction));
  }
  panel.append(el('h4', {}, 'Scores'));
  for (const bar of dashboard.scoreBars()) {
    panel.append(renderBar(bar.label, bar.count, bar.fraction));
  }
  panel.append(el('h4', {}, 'Weekly activity'));
  for (const bar of dashboard.activityBars()) {
    panel.append(renderBar(bar.label, bar.count, bar.fraction));
  }
}

function renderBar(label: string, count: number, fraction: number): HTMLElement {
  const fill = el('div', {
    class: 'bar-fill',
    style: `width:${Math.round(fraction * 100)}%`,
  });
  return el('div', { class: 'bar' }, el('span', {}, `${label} (${count})`), fill);
}

renderAuth();
renderLive();
renderEditor();
renderFeed();
