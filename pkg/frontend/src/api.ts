/** Thin client for the survey service HTTP API. */

import type {
  ApiErrorBody,
  DayFragment,
  RespondentStatus,
  TaxonomyOptions,
  ValidationItem,
} from './types.js';

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
    this.name = 'ServiceError';
  }

  /** Placemark index from a 422 KML parse error, when the service sent one. */
  get placemarkIndex(): number | null {
    const match = /placemark_index=(\d+)/.exec(this.body.detail ?? '');
    return match ? Number(match[1]) : null;
  }
}

async function throwServiceError(response: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = { code: 'unknown', message: response.statusText, detail: null };
  }
  throw new ServiceError(response.status, body);
}

export interface RegistrationForm {
  respondent_id?: string;
  age: number;
  gender: string;
  household_size: number;
  employment: string;
  workplace_arrangement: string;
  income_band: string;
}

export class DiaryClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await throwServiceError(response);
    }
    return response;
  }

  async register(form: RegistrationForm): Promise<{ respondent_id: string; phase: string }> {
    const response = await this.request('/respondents', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(form),
    });
    return response.json();
  }

  /** Upload one day's raw KML bytes; resolves to the generated fragment. */
  async uploadDay(
    respondentId: string,
    date: string,
    kml: BodyInit,
  ): Promise<DayFragment> {
    const response = await this.request(
      `/respondents/${encodeURIComponent(respondentId)}/days/${date}/kml`,
      { method: 'POST', body: kml },
    );
    return response.json();
  }

  async fetchOptions(): Promise<TaxonomyOptions> {
    return (await this.request('/options')).json();
  }

  async fetchStatus(respondentId: string): Promise<RespondentStatus> {
    return (
      await this.request(`/respondents/${encodeURIComponent(respondentId)}/status`)
    ).json();
  }

  /** Idempotent: re-posting the same batch leaves the diary unchanged. */
  async submitValidations(
    respondentId: string,
    items: ValidationItem[],
  ): Promise<RespondentStatus> {
    const response = await this.request(
      `/respondents/${encodeURIComponent(respondentId)}/validations`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(items),
      },
    );
    return response.json();
  }
}
