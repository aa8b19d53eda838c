/** Wire types of the survey service (glh-diary/1 documents). */

export type EventKind = 'activity' | 'trip_leg';

export interface DiaryEventView {
  event_index: number;
  kind: EventKind;
  name: string;
  address: string | null;
  begin: string; // ISO-8601 UTC
  end: string;
  duration_s: number;
  source_date: string;
  purpose?: { category: string; subtype: string } | null;
  inferred_mode?: string | null;
  validated_mode?: string | null;
  distance_m?: number;
  avg_speed_kmh?: number | null;
}

export interface DayFragment {
  schema: string;
  respondent_id: string;
  date: string;
  events: DiaryEventView[];
}

export interface TaxonomyOptions {
  purposes: string[];
  mode_responses: string[];
}

export interface RespondentStatus {
  respondent_id: string;
  phase: string;
  days: string[];
  activities: number;
  trip_legs: number;
  validated_activities: number;
  validated_trip_legs: number;
}

export interface ValidationItem {
  event_index: number;
  purpose?: string;
  mode_response?: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: string | null;
}
