import { describe, expect, it, vi } from 'vitest';

import { DiaryClient, ServiceError } from '../src/api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('DiaryClient', () => {
  it('uploads raw bytes to the per-day endpoint', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(201, { schema: 'glh-diary/1', respondent_id: 'r1', date: '2023-07-02', events: [] }),
    );
    const client = new DiaryClient('http://svc', fetchMock as unknown as typeof fetch);
    const fragment = await client.uploadDay('r1', '2023-07-02', new Uint8Array([60, 107]));
    expect(fragment.date).toBe('2023-07-02');
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe('http://svc/respondents/r1/days/2023-07-02/kml');
    expect((init as RequestInit).method).toBe('POST');
  });

  it('surfaces error bodies as ServiceError', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(409, { code: 'duplicate_day', message: 'already uploaded', detail: null }),
    );
    const client = new DiaryClient('', fetchMock as unknown as typeof fetch);
    const failure = await client
      .uploadDay('r1', '2023-07-02', new Uint8Array())
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ServiceError);
    expect((failure as ServiceError).status).toBe(409);
    expect((failure as ServiceError).body.code).toBe('duplicate_day');
  });

  it('extracts the placemark index from 422 parse errors', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(422, {
        code: 'missing_timespan',
        message: 'placemark 3: missing TimeSpan begin/end',
        detail: 'placemark_index=3',
      }),
    );
    const client = new DiaryClient('', fetchMock as unknown as typeof fetch);
    const failure = await client
      .uploadDay('r1', '2023-07-02', new Uint8Array())
      .catch((error: unknown) => error);
    expect((failure as ServiceError).placemarkIndex).toBe(3);
  });

  it('posts validation batches as JSON', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(200, {
        respondent_id: 'r1', phase: 'validated', days: ['2023-07-02'],
        activities: 5, trip_legs: 5, validated_activities: 5, validated_trip_legs: 5,
      }),
    );
    const client = new DiaryClient('', fetchMock as unknown as typeof fetch);
    const status = await client.submitValidations('r1', [
      { event_index: 0, purpose: 'Home' },
      { event_index: 1, mode_response: 'Driving alone' },
    ]);
    expect(status.phase).toBe('validated');
    const [, init] = fetchMock.mock.calls[0]!;
    const sent = JSON.parse((init as RequestInit).body as string);
    expect(sent).toHaveLength(2);
    expect(sent[1]).toEqual({ event_index: 1, mode_response: 'Driving alone' });
  });
});
