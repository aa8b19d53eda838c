/**
 * Diary table view models.
 *
 * The service is the only parser; this module just turns a day fragment
 * into ordered rows with the right prompt and dropdown options, and turns
 * the user's selections back into a validation payload. Both directions
 * are pure functions, so re-rendering the same fragment with the same
 * selections always produces the same rows and the same payload.
 */

import type { DayFragment, DiaryEventView, TaxonomyOptions, ValidationItem } from './types.js';

export type RowKind = 'ActivityRow' | 'LegRow';

export interface DiaryRowView {
  eventIndex: number;
  date: string;
  time: string; // local HH:MM in the survey time zone
  name: string;
  address: string; // legs render as N/A
  rowKind: RowKind;
  prompt: string;
  selected: string | null;
  options: string[];
  warning: string | null;
}

export const ACTIVITY_PROMPT = 'What were you doing at this location';
export const LEG_PROMPT = 'What was your travel mode for this trip';
export const SURVEY_TIME_ZONE = 'America/Toronto';

/** Selections keyed by event index; values are option strings. */
export type Selections = ReadonlyMap<number, string>;

export function formatLocalTime(iso: string, timeZone: string = SURVEY_TIME_ZONE): string {
  const parsed = new Date(iso);
  if (Number.isNaN(parsed.getTime())) {
    return '--:--';
  }
  return new Intl.DateTimeFormat('en-CA', {
    hour: '2-digit',
    minute: '2-digit',
    hour12: false,
    timeZone,
  }).format(parsed);
}

function rowForEvent(
  event: DiaryEventView,
  date: string,
  options: TaxonomyOptions,
  selections: Selections,
): DiaryRowView {
  const isLeg = event.kind === 'trip_leg';
  let warning: string | null = null;
  if (typeof event.begin !== 'string' || Number.isNaN(new Date(event.begin).getTime())) {
    warning = 'event has an unreadable start time';
  }
  return {
    eventIndex: event.event_index,
    date,
    time: warning ? '--:--' : formatLocalTime(event.begin),
    name: event.name || '(unnamed)',
    address: isLeg ? 'N/A' : event.address ?? '',
    rowKind: isLeg ? 'LegRow' : 'ActivityRow',
    prompt: isLeg ? LEG_PROMPT : ACTIVITY_PROMPT,
    selected: selections.get(event.event_index) ?? null,
    options: isLeg ? options.mode_responses : options.purposes,
    warning,
  };
}

/** One row per event of the fragment, in chronological (fragment) order. */
export function renderDiary(
  fragment: DayFragment,
  options: TaxonomyOptions,
  selections: Selections = new Map(),
): DiaryRowView[] {
  return fragment.events.map((event) => rowForEvent(event, fragment.date, options, selections));
}

export function allRowsSelected(rows: DiaryRowView[], selections: Selections): boolean {
  return rows.every((row) => {
    const value = selections.get(row.eventIndex);
    return value !== undefined && value !== '';
  });
}

/**
 * The submit payload for the current selections, one item per row.
 * Throws when a row has no selection; the UI keeps submit disabled until
 * allRowsSelected says otherwise.
 */
export function buildSubmitPayload(rows: DiaryRowView[], selections: Selections): ValidationItem[] {
  return rows.map((row) => {
    const value = selections.get(row.eventIndex);
    if (value === undefined || value === '') {
      throw new Error(`row for event ${row.eventIndex} has no selection`);
    }
    return row.rowKind === 'LegRow'
      ? { event_index: row.eventIndex, mode_response: value }
      : { event_index: row.eventIndex, purpose: value };
  });
}
