/**
 * Single-page validation flow: upload a day's KML, verify the generated
 * diary rows, submit, move to the next day. At most one upload or
 * submission is in flight at a time; submit stays disabled until every
 * row has a selection.
 */

import { DiaryClient, ServiceError } from './api.js';
import {
  DiaryRowView,
  allRowsSelected,
  buildSubmitPayload,
  renderDiary,
} from './rows.js';
import type { DayFragment, TaxonomyOptions } from './types.js';

const SURVEY_DAYS = 7;

interface AppState {
  client: DiaryClient;
  respondentId: string | null;
  options: TaxonomyOptions | null;
  fragment: DayFragment | null;
  rows: DiaryRowView[];
  selections: Map<number, string>;
  daysDone: number;
  busy: boolean;
}

const state: AppState = {
  client: new DiaryClient(''),
  respondentId: null,
  options: null,
  fragment: null,
  rows: [],
  selections: new Map(),
  daysDone: 0,
  busy: false,
};

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function setNotice(text: string, kind: 'info' | 'error' = 'info'): void {
  const notice = byId<HTMLDivElement>('notice');
  notice.textContent = text;
  notice.className = kind;
}

function describeError(error: unknown): string {
  if (error instanceof ServiceError) {
    if (error.status === 409) {
      return 'This day is already uploaded; your existing diary is kept. Pick the next day.';
    }
    if (error.status === 422) {
      const index = error.placemarkIndex;
      return index === null
        ? `That file could not be read as a timeline export (${error.body.message}).`
        : `That file could not be read: problem at entry ${index + 1} of the export.`;
    }
    return error.body.message;
  }
  return String(error);
}

function updateProgress(): void {
  byId<HTMLSpanElement>('progress').textContent = `${state.daysDone}/${SURVEY_DAYS} days validated`;
}

function updateSubmitState(): void {
  const button = byId<HTMLButtonElement>('submit');
  button.disabled =
    state.busy || state.rows.length === 0 || !allRowsSelected(state.rows, state.selections);
  for (const row of state.rows) {
    const element = document.querySelector(`tr[data-event-index="${row.eventIndex}"]`);
    if (element) {
      element.classList.toggle('unselected', !state.selections.has(row.eventIndex));
    }
  }
}

function renderTable(): void {
  const table = byId<HTMLTableSectionElement>('diary-body');
  table.replaceChildren();
  if (!state.fragment || !state.options) {
    byId<HTMLParagraphElement>('empty-note').hidden = false;
    return;
  }
  state.rows = renderDiary(state.fragment, state.options, state.selections);
  byId<HTMLParagraphElement>('empty-note').hidden = state.rows.length > 0;

  for (const row of state.rows) {
    const tr = document.createElement('tr');
    tr.dataset.eventIndex = String(row.eventIndex);
    tr.className = row.rowKind === 'LegRow' ? 'leg' : 'activity';

    const info = document.createElement('td');
    info.innerHTML = `<span class="time">${row.date} ${row.time}</span><br>` +
      `<strong>${row.name}</strong><br><span class="address"></span>`;
    (info.querySelector('.address') as HTMLSpanElement).textContent = row.address;
    tr.appendChild(info);

    const ask = document.createElement('td');
    const label = document.createElement('label');
    label.textContent = row.prompt + ': ';
    const select = document.createElement('select');
    const blank = document.createElement('option');
    blank.value = '';
    blank.textContent = '-- choose --';
    select.appendChild(blank);
    for (const option of row.options) {
      const el = document.createElement('option');
      el.value = option;
      el.textContent = option;
      select.appendChild(el);
    }
    select.value = row.selected ?? '';
    select.addEventListener('change', () => {
      if (select.value === '') {
        state.selections.delete(row.eventIndex);
      } else {
        state.selections.set(row.eventIndex, select.value);
      }
      updateSubmitState();
    });
    label.appendChild(select);
    ask.appendChild(label);
    if (row.warning) {
      const warn = document.createElement('div');
      warn.className = 'warning';
      warn.textContent = row.warning;
      ask.appendChild(warn);
    }
    tr.appendChild(ask);
    table.appendChild(tr);
  }
  updateSubmitState();
}

async function startSession(): Promise<void> {
  const respondentId = byId<HTMLInputElement>('respondent-id').value.trim();
  if (!respondentId) {
    setNotice('Enter the respondent id you received for the survey.', 'error');
    return;
  }
  try {
    state.options = await state.client.fetchOptions();
    const status = await state.client.fetchStatus(respondentId);
    state.respondentId = status.respondent_id;
    state.daysDone = status.days.length;
    byId<HTMLDivElement>('session').hidden = true;
    byId<HTMLDivElement>('day-panel').hidden = false;
    updateProgress();
    setNotice(`Welcome back. Upload the timeline KML file for your next survey day.`);
  } catch (error) {
    setNotice(describeError(error), 'error');
  }
}

async function uploadChosenFile(): Promise<void> {
  if (state.busy || !state.respondentId) return;
  const fileInput = byId<HTMLInputElement>('kml-file');
  const dateInput = byId<HTMLInputElement>('day-date');
  const file = fileInput.files?.[0];
  if (!file || !dateInput.value) {
    setNotice('Pick the day and choose its exported KML file first.', 'error');
    return;
  }
  state.busy = true;
  try {
    const bytes = await file.arrayBuffer();
    state.fragment = await state.client.uploadDay(state.respondentId, dateInput.value, bytes);
    state.selections = new Map();
    setNotice('Please verify travel and activities before proceeding.');
    renderTable();
  } catch (error) {
    setNotice(describeError(error), 'error');
  } finally {
    state.busy = false;
    updateSubmitState();
  }
}

async function submitDay(): Promise<void> {
  if (state.busy || !state.respondentId || !state.fragment) return;
  state.busy = true;
  updateSubmitState();
  try {
    const payload = buildSubmitPayload(state.rows, state.selections);
    await state.client.submitValidations(state.respondentId, payload);
    state.daysDone += 1;
    state.fragment = null;
    state.rows = [];
    state.selections = new Map();
    renderTable();
    updateProgress();
    byId<HTMLInputElement>('kml-file').value = '';
    setNotice(
      state.daysDone >= SURVEY_DAYS
        ? 'All survey days are validated. Thank you!'
        : 'Day saved. Upload the timeline KML file for your next survey day.',
    );
  } catch (error) {
    setNotice(describeError(error), 'error');
  } finally {
    state.busy = false;
    updateSubmitState();
  }
}

export function wireUp(): void {
  byId<HTMLButtonElement>('start').addEventListener('click', () => void startSession());
  byId<HTMLButtonElement>('upload').addEventListener('click', () => void uploadChosenFile());
  byId<HTMLButtonElement>('submit').addEventListener('click', () => void submitDay());
  updateProgress();
  updateSubmitState();
}

if (typeof document !== 'undefined' && document.getElementById('day-panel')) {
  wireUp();
}
