import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import {
  ACTIVITY_PROMPT,
  LEG_PROMPT,
  allRowsSelected,
  buildSubmitPayload,
  formatLocalTime,
  renderDiary,
} from '../src/rows.js';
import type { DayFragment, TaxonomyOptions } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

const fragment: DayFragment = JSON.parse(
  readFileSync(join(here, 'fixtures', 'fig2-fragment.json'), 'utf-8'),
);

const options: TaxonomyOptions = {
  purposes: ['Home', 'Work', 'Dine in restaurant, bar, coffee, etc.'],
  mode_responses: ['Driving alone', 'Driving with household members only', 'Walking'],
};

function selectEverything(rows: ReturnType<typeof renderDiary>): Map<number, string> {
  const selections = new Map<number, string>();
  for (const row of rows) {
    selections.set(row.eventIndex, row.rowKind === 'LegRow' ? 'Driving alone' : 'Home');
  }
  return selections;
}

describe('renderDiary', () => {
  it('renders ten rows for the fixture day, in order', () => {
    const rows = renderDiary(fragment, options);
    expect(rows).toHaveLength(10);
    expect(rows.map((r) => r.rowKind)).toEqual([
      'ActivityRow', 'LegRow', 'ActivityRow', 'LegRow', 'ActivityRow',
      'LegRow', 'ActivityRow', 'LegRow', 'ActivityRow', 'LegRow',
    ]);
    expect(rows[0]?.name).toBe('Golden Court Plaza 黃金商場');
    expect(rows.map((r) => r.eventIndex)).toEqual([...rows.map((r) => r.eventIndex)].sort((a, b) => a - b));
  });

  it('row count always equals event count', () => {
    for (const size of [0, 1, 3, fragment.events.length]) {
      const slice: DayFragment = { ...fragment, events: fragment.events.slice(0, size) };
      expect(renderDiary(slice, options)).toHaveLength(size);
    }
  });

  it('uses the right prompt and options per row kind', () => {
    const rows = renderDiary(fragment, options);
    for (const row of rows) {
      if (row.rowKind === 'LegRow') {
        expect(row.prompt).toBe(LEG_PROMPT);
        expect(row.options).toEqual(options.mode_responses);
      } else {
        expect(row.prompt).toBe(ACTIVITY_PROMPT);
        expect(row.options).toEqual(options.purposes);
      }
    }
  });

  it('shows N/A addresses on leg rows', () => {
    const rows = renderDiary(fragment, options);
    for (const row of rows.filter((r) => r.rowKind === 'LegRow')) {
      expect(row.address).toBe('N/A');
    }
    expect(rows[0]?.address).toContain('330 Hwy 7');
  });

  it('formats times in the survey time zone', () => {
    const rows = renderDiary(fragment, options);
    // the first driving leg starts 18:26 UTC == 14:26 in Toronto (EDT)
    expect(rows[1]?.time).toBe('14:26');
    expect(formatLocalTime('2023-07-02T18:26:00Z')).toBe('14:26');
  });

  it('warns per row instead of failing the page', () => {
    const broken: DayFragment = {
      ...fragment,
      events: [
        { ...fragment.events[0]!, begin: 'not-a-time' },
        ...fragment.events.slice(1),
      ],
    };
    const rows = renderDiary(broken, options);
    expect(rows).toHaveLength(10);
    expect(rows[0]?.warning).toBeTruthy();
    expect(rows[0]?.time).toBe('--:--');
    expect(rows[1]?.warning).toBeNull();
  });
});

describe('selection gating and payload', () => {
  it('submit stays blocked until every row is selected', () => {
    const rows = renderDiary(fragment, options);
    const selections = new Map<number, string>();
    expect(allRowsSelected(rows, selections)).toBe(false);
    for (const row of rows.slice(0, -1)) {
      selections.set(row.eventIndex, row.rowKind === 'LegRow' ? 'Walking' : 'Home');
    }
    expect(allRowsSelected(rows, selections)).toBe(false);
    const last = rows[rows.length - 1]!;
    selections.set(last.eventIndex, last.rowKind === 'LegRow' ? 'Walking' : 'Home');
    expect(allRowsSelected(rows, selections)).toBe(true);
  });

  it('payload is a pure function of fragment and selections', () => {
    const rows = renderDiary(fragment, options);
    const selections = selectEverything(rows);
    const first = buildSubmitPayload(rows, selections);
    const second = buildSubmitPayload(renderDiary(fragment, options, selections), selections);
    expect(second).toEqual(first);
  });

  it('passes the detailed response string through verbatim', () => {
    const rows = renderDiary(fragment, options);
    const selections = selectEverything(rows);
    const legIndex = rows.find((r) => r.rowKind === 'LegRow')!.eventIndex;
    selections.set(legIndex, 'Driving with household members only');
    const payload = buildSubmitPayload(rows, selections);
    const item = payload.find((entry) => entry.event_index === legIndex)!;
    expect(item.mode_response).toBe('Driving with household members only');
    expect(item.purpose).toBeUndefined();
  });

  it('refuses to build a payload with a missing selection', () => {
    const rows = renderDiary(fragment, options);
    expect(() => buildSubmitPayload(rows, new Map())).toThrow(/no selection/);
  });
});
